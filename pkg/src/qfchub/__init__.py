"""Design toolkit for quasi-phase-matched frequency conversion in PPLN.

Computes temperature-dependent dispersion, phase-matching spectra and
90%-threshold pump-tuning ranges, DWDM per-channel pump plans, and the
polarization-preserving conversion channel with process tomography.
"""

from .constants import C_NM_THZ, C_UM_THZ
from .dispersion import (DEFAULT_MATERIAL, SellmeierModel, SpectralPoint,
                         builtin_materials, get_material, group_index,
                         index_derivative, load_material_file, refractive_index,
                         wavelength_frequency_convert)
from .dwdm import (DwdmGrid, EfficiencyCurvePoint, LaserSpec, PumpPlan,
                   PumpPlanEntry, high_efficiency_band, plan_pumps,
                   port_frequency, relative_efficiency_curve)
from .errors import (ConfigError, ConvergenceError, DegenerateError, DomainError,
                     QfcHubError, RangeError, SingularityError, ValidityError)
from .polarization import (EfficiencyCurveParams, EfficiencyFit,
                           PolarizationState, ProcessMatrix, PumpSplit,
                           QfcChannelModel, apply_channel, apply_process,
                           chi_from_payload, chi_payload, efficiency_model,
                           fit_efficiency, ideal_process, kraus_operator,
                           kraus_to_chi, process_fidelity, pump_balance,
                           reconstruct_chi, simulate_tomography)
from .qpm import (DeviceConfig, InteractionTriple, group_index_mismatch,
                  make_device, phase_mismatch, phase_mismatch_vs_converted,
                  pm_efficiency, pump_for, sinc, solve_poling_period)
from .tuning import (HubSweepPoint, SpectrumPoint, SweetSpotReport,
                     TuningConstraints, TuningResult, channel_count, hub_sweep,
                     pm_spectrum, sweep_csv_rows, sweet_spot_report,
                     tuning_range)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
