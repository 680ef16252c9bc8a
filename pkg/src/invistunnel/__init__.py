"""1D quantum-scattering toolkit for tunneling-invisible systems.

Exact transfer-matrix transmission, complex-k pole analysis, resonance
expansions, dwell times, and wave-packet invisibility diagnostics for
compact-support potentials in eV / nm / fs units.
"""

from .units import GAAS, PhysicalParams, E_of_k, k_of_E
from .potential import (PotentialProfile, PTTerm, Slice, build_chain,
                        build_pt_composite, build_rect, evaluate, preset,
                        slice_continuous, PRESETS)
from .scatter import (NumericsError, ScatteringSolution, TransferMatrix,
                      amplitudes, transfer_matrix, transmission_curve,
                      wavefunction)
from .poles import (Pole, PoleSet, find_poles, refine_pole,
                    thin_barrier_estimate, threshold_pole)
from .expansion import (OnePoleModel, E_q_of_pole, T_single_pole,
                        t_expansion, t_pt_analytic, t_single_pole)
from .times import (DwellReport, dwell_components, dwell_decomposition,
                    dwell_time, free_time)
from .packet import (GaussianSpec, PacketTrace, evolve_transmitted,
                     free_packet, invisibility_score, momentum_profile)
from .sweep import (ContourTable, SweepSpec, invisibility_window,
                    transmission_contour)

__version__ = "0.1.0"
