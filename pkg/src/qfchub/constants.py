"""Physical constants and the unit conventions used throughout.

Internal conventions: wavelengths in um (vacuum), frequencies in THz,
temperatures in deg C, crystal lengths in mm, wavevectors in rad/um
internally and rad/m at public interfaces.
"""

# Speed of light. The nm*THz value is exact (c = 299792458 m/s).
C_NM_THZ = 299792.458
C_UM_THZ = C_NM_THZ / 1000.0

# Single place where the internal rad/um wavevector scale meets the
# public rad/m interface.
RAD_PER_UM_TO_RAD_PER_M = 1.0e6

# Boundary refinement resolution for tuning-range bisection, in GHz.
REFINE_GHZ = 0.1
