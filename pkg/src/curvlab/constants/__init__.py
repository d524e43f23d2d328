"""Analytic constants: Chebyshev spectral data, series bounds and per-family CLSI constants."""
from .chebyshev import (BoundReport, ChebyshevOverflowError, ChebyshevTable, OnPlusSpectrum,
                        QautSpectrum, chebyshev_table, hunt_eigenvalues, onplus_spectral_data,
                        qaut_spectral_data)
from .families import (ConstantReport, FamilyCheck, SeriesEval, chebyshev_sup_norm, clsi_from,
                       exp_growth_chain, exp_growth_clsi, fourier_clsi, free_wordlength_clsi, kappa,
                       onplus_clsi, onplus_closed, onplus_series, qaut_clsi, qaut_closed, qaut_series,
                       sphere_area, torus_constants, torus_poisson_lattice_tcb)
from .growth import GrowthData, parse_growth
