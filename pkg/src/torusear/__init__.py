"""
Exact Laplacian spectra of cycles, discrete tori and circulant graphs.

Eigenvalues are kept as exact elements of cyclotomic fields, so spectra
can be compared, multiplied and divided without rounding.  On top of that
sit theta functions, the reconstruction of a torus from its spectrum, and a
lab for sweeping circulant graphs for cospectral non-isomorphic pairs.
"""
from .circulants import (
    CirculantSpec,
    IsomorphismVerdict,
    SearchReport,
    circulant_isomorphic,
    enumerate_circulants,
    search_cospectral,
    verify_counterexample,
)
from .cyclo import CycloReal, cmp, cyclotomic_poly, eig_value
from .errors import (
    DegenerateSpectrum,
    InvalidParameter,
    InvalidSampler,
    NotAProduct,
    NotATorusSpectrum,
    PrecisionExhausted,
    RecoveryFailure,
    TorusearError,
)
from .graphs import (
    MultiGraph,
    cartesian_product,
    circulant_graph,
    complete_graph,
    cycle_graph,
    laplacian,
    torus_graph,
)
from .hearing import (
    TorusShape,
    canonical_shape,
    enumerate_shapes,
    hear_dimension,
    hear_m_max,
    hear_torus,
    tori_isomorphic,
)
from .spectra import (
    CharPoly,
    Spectrum,
    algebraic_connectivity,
    char_poly,
    circulant_spectrum,
    cycle_spectrum,
    isospectral,
    numeric_spectrum,
    spectrum_quotient,
    spectrum_sum,
    torus_spectrum,
)
from .theta import (
    ThetaFunction,
    spectrum_from_theta,
    spectrum_from_theta_samples,
    theta_divide,
    theta_divide_numeric,
    theta_from_spectrum,
    theta_product,
)

__version__ = "0.1.0"
