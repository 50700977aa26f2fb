"""Multi-vector Cauchy-Schwarz inequalities and multi-operator uncertainty relations."""

from .csineq import (DEFAULT_TOL, InequalityReport, PairSet, Relation, balanced_cs,
                     balanced_cs_kets, combine_reports, enumerate_pairsets,
                     multivariance_cs_vectors, unbalanced_cs, unbalanced_cs_kets)
from .errors import *  # noqa: F401,F403
from .linalg import (QuantumState, deviation, expectation, hermitian_inner, is_hermitian,
                     norm)
from .multivariance import (OperatorSequence, PartitionedRelationReport,
                            all_partitioned_relations, deviation_product_state, multivariance,
                            partitioned_relation, symmetric_multivariance, symmetric_relation)
from .squeezing import (Fig6Region, RowLabel, SqueezingClassification, Table1Row, beta,
                        classify, fig6_region, oscillator_demo, table1_row, unit_beta_scale)
from .states import (concurrence, fock_ladder, momentum_op, one_qubit_family, position_op,
                     random_density, random_hermitian, random_operator, random_pure,
                     two_qubit_family)
from .uncertainty import (CovarianceDecomposition, GeneralizedMoments, Mode,
                          balanced_relation, covariance, covariance_decomposition,
                          covariance_matrix, gen_covariance, pseudo_anticommutator,
                          pseudo_commutator, std, tightest_product, unbalanced_relation,
                          variance)

__version__ = "0.1.0"
