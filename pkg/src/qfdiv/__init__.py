"""Quantum f-divergences, Petz recovery and channel reversibility on matrix algebras."""
__version__ = "0.1.0"

from .matcore import (PsdOperator, SpectralDecomposition, as_psd, cauchy_solve, kron, log_star,
                      partial_trace, power_on_support, schatten_p, spectral_decompose,
                      support_projection, tensor_power, trace_norm)
from .fdiv import (ClassicalPair, DivergenceFunction, build_function, classical_f_divergence,
                   f_divergence, fidelity, nsz_reduce, relative_entropy, renyi)
from .channels import (Channel, complete_to_stochastic, contraction_V, petz_maps, pinching_channel,
                       properties, tomiyama_map, trace_preservation_report)
from .opconvex import (RepresentingMeasure, canonical_representation, divergence_via_representation,
                       eval_representation)
from .discrimination import (PsiCurve, bayes_measure_tp, chernoff_distance, exponent_trend,
                             hoeffding_distance, psi)
from .reversibility import (chernoff_hoeffding_recovery, cocycle_residual, equality_report,
                            error_correction_check, fixed_point_structure, holder_equality_check,
                            inverse_holder_check, pinching_chain_check, recover)
