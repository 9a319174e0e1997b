"""Averaged leakage out of the computational subspace, with and without spin-orbit rotation."""

import numpy as np

from _common import emit, parser
from stc import UniformDevice, gate_time, leakage_trace

args = parser(__doc__)
args.add_argument("--points", type=int, default=2001)
args.add_argument("--gates", type=float, default=10.0, help="window length in gate times")
args = args.parse_args()

J = 0.4
device = dict(hbar=20.0, jsc=J, dh=2.0, dh1=1.0, dh2=1.0)
times = np.linspace(0.0, args.gates * gate_time(J), args.points)
sweet = leakage_trace(UniformDevice(phi_so=np.pi / 2, theta=np.pi / 2, **device).spin_params(), times)
plain = leakage_trace(UniformDevice(phi_so=0.0, **device).spin_params(), times)
emit(["t_ns", "leakage_sweet_spot", "leakage_no_soi"], list(zip(times, sweet.values, plain.values)), args.out)
