"""Barrier function, cutoffs, test functions and the scaling integrals built on them."""
from .closedform import RadialClosedForm, Term, apply_laplacian, apply_Lmu, differentiate
from .cutoffs import CutoffProfile, Kind, make_cutoff
from .estimates import (
    LEMMAS,
    LemmaCheck,
    LogSpaceEstimator,
    check_lemma,
    estimate_space_integrals,
    estimate_time_integral,
    fit_slope,
)
from .testfunc import (
    FProfile,
    SpaceKind,
    TestFunction,
    assemble_test_function,
    build_H,
    certify_barrier,
    profile_F,
    verify_admissible,
)

__all__ = [
    "CutoffProfile",
    "FProfile",
    "Kind",
    "LEMMAS",
    "LemmaCheck",
    "LogSpaceEstimator",
    "RadialClosedForm",
    "SpaceKind",
    "Term",
    "TestFunction",
    "apply_Lmu",
    "apply_laplacian",
    "assemble_test_function",
    "build_H",
    "certify_barrier",
    "check_lemma",
    "differentiate",
    "estimate_space_integrals",
    "estimate_time_integral",
    "fit_slope",
    "make_cutoff",
    "profile_F",
    "verify_admissible",
]
