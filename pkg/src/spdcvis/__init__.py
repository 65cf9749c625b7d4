"""Two-photon interference visibility for type-II SPDC with transverse filtering."""

from .crystal import CrystalSpec, DispersionParams, delta_mismatch, dispersion_params, kappa, phase_matching_angle
from .errors import ApproximationWarning, ConfigError, DomainError, GridResolutionWarning, QuadratureError
from .interference import (CwPlane, FiniteBeam, PatternGrid, PulsedPlane, asymmetry, pattern, visibility,
                           visibility_cw, visibility_pulsed, visibility_vs_thickness)
from .optics import (Annular, ApertureSpec, Circular, GaussianFilter, Mask, OpticalSystemSpec, Slit,
                     impulse_response, ptilde, rasterize, transfer_function)
from .oracle import biphoton_direct, oracle_table, v_oracle
from .prism import PrismSpec, beta_dispersion, prism_negligible, snell_map
from .pumpgeom import delta_with_pump, planewave_valid
from .scenario import Scenario, load_scenario

__version__ = "0.1.0"
