"""Strong Li-Yorke chaos for time-varying interval maps via strict coupled-expansion.

Typical pipeline::

    from liyorke import logistic_example, validate, certify, synthesize, pairwise_report

    sys = logistic_example()
    cert = certify(sys, validate([[1, 1], [1, 1]]), route="T42", j0=2)
    points = synthesize(cert, sys, count=8, tol=1e-10)
    reports = pairwise_report(sys, points, cert=cert)
"""

from .certify import (
    ExpansionCertificate, certificate_from_dict, certify, check_covering, check_expansion, check_initial_covering,
    check_strictness, two_sided_comparison,
)
from .diagnose import PairReport, boundedness_check, itinerary_of_orbit, pairwise_report, summary
from .dynsys import (
    InducedSystem, ParamSequence, TimeSequence, TimeVaryingSystem, build_induced, compose, evaluate, image_interval,
    inverse_branch, logistic_example, max_abs_derivative, min_abs_derivative, orbit, system_from_config,
    system_to_config,
)
from .families import AffineFamily, CallableFamily, LogisticFamily, MapFamily, ParamRange, TentFamily
from .intervals import ClosedInterval
from .matrix import (
    TransitionMatrix, WordTriple, enumerate_words, find_alternative_word, find_long_word, find_word_triple,
    is_irreducible, minimal_return_time, parse_matrix_text, power_entry, validate,
)
from .scramble import ScrambledPoint, backward_interval, lift_to_time_zero, predicted_times, synthesize
from .symbolic import (
    ChoiceSequence, ExplicitScheme, ItineraryScheme, Schedule31, Schedule42, build_alpha, build_beta_hat_31,
    build_beta_hat_42, build_schedule31, default_choices, sequence_distance,
)

__version__ = "0.1.0"
