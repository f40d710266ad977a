"""Zero-energy scattering transforms of radial potentials on the unit disc.

The package computes the scattering transform t(k) of radial, compactly
supported potentials through a Fourier-truncated boundary integral
equation, detects the circles in the k-plane where the transform blows up,
and checks the asymptotic radius and small-|k| laws that govern them.
"""

from .analysis import (
    DetectedRadius,
    ExceptionalReport,
    asymptotic_radius,
    detect_exceptional_radii,
    safe_k_scale,
    scan_exceptional_radii,
    small_k_law,
)
from .bie import (
    BoundarySystem,
    FourierTrace,
    HkCache,
    ScatteringSample,
    TraceSolution,
    assemble_hk_matrix,
    assemble_system,
    rhs_exponential,
    scattering_sample,
    scattering_transform,
    solve_trace,
    zero_mode_diagnostic,
)
from .faddeev import (
    EULER_GAMMA,
    H1_AT_ZERO,
    KernelEvaluation,
    SingularPointError,
    exp_integral,
    g1,
    h1,
    h_kernel,
    h_kernel_eval,
)
from .oracles import (
    OracleResult,
    bessel_dn_oracle,
    fd_laplacian,
    gk_integral_oracle,
    quadrature,
)
from .potentials import (
    DomainError,
    ParameterError,
    PotentialFamilyMember,
    RadialProfile,
    bump_profile,
    conductivity_to_potential,
    constant_profile,
    family_member,
    sigma_profile,
    test_bump,
    zero_profile,
)
from .radial_dn import (
    DirichletPoleError,
    DNSpectrum,
    RadialModeSolution,
    dn_eigenvalue,
    dn_spectrum,
    mu_prime_at_zero,
    solve_radial_mode,
)
from .sweep import (
    GridSpec,
    SweepConfig,
    SweepResult,
    build_potentials,
    emit_outputs,
    parse_config,
    run_sweep,
)

__version__ = "0.1.0"
