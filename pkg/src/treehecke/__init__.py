"""Exact mod-p computations with GL2 of a p-adic field on its tree.

The package models compactly induced mod-p representations of GL2 over a
local field with residue field F_q (q <= 81) at desk scale: every coset is
reduced to a canonical label inside a finite ball, every operator identity
is checked by exact arithmetic, and a quotient oracle decides membership in
the image of the spherical Hecke operator with explicit certificates.
"""

from .errors import (BadIndex, CharacterMismatch, ConfigError, CutoffExceeded,
                     DimensionMismatch, DivisionByZero, FieldMismatch,
                     LabError, NotAUnit, OutOfBall, PrecisionExhausted,
                     ResourceBudgetExceeded, SingularMatrix, UnsupportedField,
                     WordTooLong)
from .gf import FqField, HChar, MPoly, all_characters, interpolate, power_sum
from .localring import FElem, LocalParams, carry_Z, params_create
from .tree import (BallIndex, ELabel, Mat2, PropLabel, VLabel, Witness,
                   i1_generators, membership, random_pro_p_element,
                   reduce_edge, reduce_prop, reduce_vertex)
from .spaces import (FormalSum, Workspace, act_left, embed_char_component,
                     end_echi, end_tbeta, end_tns, end_torus, family_beta_s,
                     family_s, family_t, op_spherical, op_t10, op_t12,
                     op_tm10, project_to_iz, right_echi, right_tbeta,
                     right_tns, support_radius, transfer)
from .oracle import (Certificate, InvariantResult, decide_ideal,
                     decide_im_spherical, edge_vector, equal_in_quotient,
                     hecke_word_normal_form, in_solution_space,
                     invariant_space, is_invariant, span_search, vert_vector)
from .checks import REGISTRY, CheckOutcome, CheckSpec, all_checks
from .harness import (Report, RunConfig, VERSION, describe_check, list_checks,
                      report_emit, run_checks)

__version__ = VERSION
