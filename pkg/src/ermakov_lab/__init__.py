"""Exact time-dependent harmonic oscillators from Ermakov–Pinney amplitudes."""
__version__ = "0.1.0"

from .models import *  # noqa: E402,F401,F403
from .models import __all__ as _models_all  # noqa: E402
from .dynamics import *  # noqa: E402,F401,F403
from .dynamics import __all__ as _dynamics_all  # noqa: E402
from .quantum import *  # noqa: E402,F401,F403
from .quantum import __all__ as _quantum_all  # noqa: E402
from .perturbation import *  # noqa: E402,F401,F403
from .perturbation import __all__ as _perturbation_all  # noqa: E402
from .validation import run_validation  # noqa: E402

__all__ = [*_models_all, *_dynamics_all, *_quantum_all, *_perturbation_all, "run_validation"]
