"""Driven-dissipative coupled resonator arrays: steady states, photon
statistics, emission spectra and weak-drive limits for Kerr (Bose-Hubbard)
and TLS-coupled (Jaynes-Cummings-Hubbard) chains."""

from .hilbert import (FockSpace, MomentumBasis, OperatorMatrix,
                      build_fock_space, build_momentum_basis, site_operator)
from .models import (BHParams, JCHParams, bh_hamiltonian, effective_hamiltonian,
                     excitation_block, jch_hamiltonian, resonance_detuning_bh,
                     resonance_detuning_jch)
from .liouville import Superoperator, evolve, liouvillian, steady_state
from .observables import (CorrelationSeries, SpectrumResult, autocorrelation,
                          emission_spectrum, expectation, g2_local,
                          number_variance, ridge_crossing)
from .weakdrive import (BunchingRegion, WeakDriveResult, bunching_region,
                        stationary_state, weakdrive_g2, weakdrive_g2_momentum)
from . import analytics

__version__ = "0.1.0"
