"""Verification-suite profile definitions for vpm-hilbert.

Profiles limit which suites ``verify --suite all`` runs:
- quick: closed-form identities that need no oracle (6 suites)
- standard: adds the oracle cross-checks and metric axioms (10 suites)
- full: every suite, including SEB and the dual-cone sweep (12 suites, default)
"""

from typing import Literal

ProfileName = Literal["quick", "standard", "full"]

# Quick profile: identities checked directly against closed forms (6 suites)
QUICK_SUITES: set[str] = {
    "interval",
    "isometry",
    "iota",
    "airm",
    "lorentz",
    "domain",
}

# Standard profile: adds oracle agreement and metric axioms (10 suites)
STANDARD_SUITES: set[str] = QUICK_SUITES | {
    "oracle",
    "birkhoff",
    "metric",
    "eps",
}

# Full profile: all suites (12 suites)
FULL_SUITES: set[str] = STANDARD_SUITES | {
    "seb",
    "dual",
}

PROFILES: dict[str, set[str]] = {
    "quick": QUICK_SUITES,
    "standard": STANDARD_SUITES,
    "full": FULL_SUITES,
}


def get_enabled_suites(profile: str = "full") -> set[str]:
    """Get the set of enabled suites for a given profile.

    Args:
        profile: Profile name (quick, standard, full). Defaults to full.

    Returns:
        Set of suite names. Falls back to the full profile for unknown names.
    """
    return PROFILES.get(profile.lower(), FULL_SUITES)


def is_suite_enabled(suite_name: str, profile: str = "full") -> bool:
    """Check if a suite runs under the given profile."""
    return suite_name in get_enabled_suites(profile)


def get_profile_info() -> dict[str, int]:
    """Get suite counts for each profile."""
    return {name: len(suites) for name, suites in PROFILES.items()}
