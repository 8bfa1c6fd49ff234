"""Closed-form link budget and damage values in plain floats (no hpmsim import).

Source of the derived constants frozen into the tests (321.54 V/m at 30 m with
line loss, 0.9661 system kill at 205 V/m, 54.3556 m baseline 90% kill range,
0.0129136 ohm surface resistance, 1106.13 V/m pulsed peak field).

    python tests/oracles/link_budget_oracle.py
"""

import math

C, F, ETA0 = 2.998e8, 2.45e9, 377.0
LAM = C / F
DRONE = [(150, 30), (250, 50), (300, 60), (200, 40), (350, 70)]


def field(power, diameter, eta_ap, r, eta_line=1.0):
    gain = eta_ap * (math.pi * diameter / LAM) ** 2
    return math.sqrt(power * eta_line * gain / (4 * math.pi * r * r) * ETA0)


def kill(e):
    survive = 1.0
    for e50, s in DRONE:
        survive *= 1 - 1 / (1 + math.exp(-(e - e50) / s))
    return 1 - survive


if __name__ == "__main__":
    print("E(30 m, line loss)", field(25e3, 0.6, 0.55, 30, 0.98 * 0.97))
    print("P_sys(205 V/m)", kill(205.0))
    lo, hi = 1.0, 1e4
    for _ in range(200):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if kill(field(25e3, 0.6, 0.55, mid)) >= 0.9 else (lo, mid)
    print("r90 baseline", lo)
    print("Rs(2.45 GHz, Cu)", math.sqrt(math.pi * F * 4e-7 * math.pi / 5.8e7))
    print("peak E(40 m, 500 kW)", field(500e3, 0.6, 0.55, 40))
