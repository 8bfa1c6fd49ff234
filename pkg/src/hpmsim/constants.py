"""Physical constants and baseline values.

Values are frozen to the rounded figures used throughout the model (not
CODATA) so that reproduced numbers match the reference tables.
"""

import math

C = 2.998e8  # m/s
ETA0 = 377.0  # ohm, free-space impedance
MU0 = 4e-7 * math.pi  # H/m

NEPER_TO_DB = 8.686

F0 = 2.45e9  # Hz, ISM-band operating frequency
LAMBDA0 = C / F0  # ~0.12237 m

COPPER_CONDUCTIVITY = 5.8e7  # S/m
