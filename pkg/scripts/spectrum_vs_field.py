"""Spectrum of the four-spin model against the mean Zeeman splitting."""

import numpy as np

from _common import emit, parser
from stc import UniformDevice, build_h_spin, eigh

args = parser(__doc__)
args.add_argument("--points", type=int, default=61)
args = args.parse_args()

rows = []
for hbar in np.linspace(0.0, 30.0, args.points):
    device = UniformDevice(hbar=hbar, dh=2.0, dh1=1.0, dh2=1.0, jsc=0.4)
    p = device.spin_params()
    if np.any(p.hz == 0):
        continue
    rows.append([hbar, *eigh(build_h_spin(p)).values])
emit(["hbar_ueV", *(f"e{k}_ueV" for k in range(16))], rows, args.out)
