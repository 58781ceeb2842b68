"""Real 2-blocks of finite groups: exact character tables, block partitions,
witness elements in classical groups and verifiable certificates."""

__version__ = "0.1.0"

from .fields import FieldDescriptor, FieldElement, field_create, primitive_root_of_unity, eigenvalue_multiset
from .cyclotomic import CycInt, IdealReduction, cyc_conjugate, reduce_mod2
from .groups import (GroupSpec, GroupElement, MatrixGroup, ConjugacyWitness, NotConjugate, Inconclusive,
                     group_create, group_order, contains, element_order, is_conjugate, center_elements,
                     in_derived_subgroup)
from .chartab import (CharacterTable, compute_table, ingest_table, conj_permutation, restrict_and_decompose,
                      verify_table)
from .blocks import (BlockPartition, central_characters, block_partition, real_blocks,
                     has_nonprincipal_real_2block, block_covering)
from .witnesses import (NoWitness, Witness, construct_typeA, construct_typeB_SO, construct_typeC_Sp,
                        construct_typeD, check_condition_A, check_condition_B, check_condition_C, certify,
                        recheck_certificate)
from .partitions import Partition, two_core, is_self_conjugate, in_principal_2block_Sn, alternating_witness
from .verify import VerificationReport, verify_theorem
