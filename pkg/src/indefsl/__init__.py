"""m-coefficients and critical-point detectors for indefinite-weight
Sturm-Liouville operators (sgn x / |r|)(-d^2/dx^2 + q)."""

__version__ = "0.1.0"

from .coeffs import Coefficient
from .criteria import (
    BoundednessVerdict,
    ClassificationReport,
    RatioScanResult,
    ScanRegion,
    StieltjesVerdict,
    classify_decaying,
    classify_pair,
    definitizing_poly,
    find_nonreal_eigs,
    j_nonneg_check,
    necessary_ratio_scan,
    optimize_shift,
    ratio,
    scan_sup,
    stieltjes_check,
)
from .discrete import discretize, resolvent_functional, spectrum
from .mcatalog import (
    DecayingABM,
    ExampleA1M,
    ExampleQ0M,
    FiniteZoneM,
    FreeM,
    InfZoneTruncatedM,
    MPair,
    NumericM,
    PeriodicM,
    PowerWeightM,
    ab_constants,
    m_decaying_ab,
    m_example_A1,
    m_example_q0,
    m_free,
    m_power,
    m1_helper,
)
from .periodic import PeriodicData, lowest_band_edge, m_periodic, monodromy
from .sl_ode import (
    Boundary,
    FullLineProblem,
    FundamentalSample,
    HalfLineProblem,
    S0Verdict,
    Side,
    WeylSolutionSample,
    m_numeric,
    s0_boundedness,
    solve_cs,
    verify_psi_identity,
)
from .special import gamma, hankel, power_cut, sqrt_cut
from .zones import (
    ZoneData,
    ZonePolynomials,
    ZoneSequenceData,
    finitezone_build,
    m_finitezone,
    m_infzone_truncated,
)
