"""Write the JSON fixtures used by the squeeze tests.

* ``squeeze_witness_1of3.json``: first seeded draw with exactly one of three
  operators squeezed below the threshold while all subset relations hold.
* ``oscillator_xp_ops.json`` / ``vacuum_state.json``: truncated position and
  momentum with the oscillator ground state.
* ``identical_ops.json``: three copies of one Hermitian operator.
"""

import argparse
import json
from pathlib import Path

from multiop.squeezing import search_squeezing_witness
from multiop.states import (QuantumState, dump_operators, dump_state, momentum_op, number_state,
                            position_op, random_hermitian, to_json_obj)

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=FIXTURES)
    ap.add_argument("--dim", type=int, default=3)
    ap.add_argument("--fock-dim", type=int, default=12)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    found = search_squeezing_witness(1, 3, args.dim, range(1000))
    if found is None:
        raise SystemExit("no 1/3 witness among seeds 0..999")
    seed, state, ops, result = found
    doc = {"seed": seed, "label": result.label, "state": to_json_obj(state),
           "operators": [to_json_obj(a) for a in ops], "classification": result.to_dict()}
    (args.out / "squeeze_witness_1of3.json").write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
    print(f"1/3 witness at seed {seed}: variances {result.gen_variances}, threshold {result.threshold:.6g}")

    n = args.fock_dim
    dump_operators([position_op(n), momentum_op(n)], args.out / "oscillator_xp_ops.json")
    dump_state(QuantumState.from_ket(number_state(0, n)), args.out / "vacuum_state.json")
    dump_operators([random_hermitian(2, 5)] * 3, args.out / "identical_ops.json")


if __name__ == "__main__":
    main()
