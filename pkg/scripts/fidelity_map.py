"""cZ infidelity map around the sweet spot and a comparison of device configurations."""

from dataclasses import replace

import numpy as np

from _common import emit, parser
from stc import UniformDevice, cz_fidelity, fidelity_map

args = parser(__doc__)
args.add_argument("--points", type=int, default=31)
args.add_argument("--workers", type=int, default=1)
args.add_argument("--compare", action="store_true", help="print the device comparison instead of the map")
args = args.parse_args()

J = 0.4
sweet = UniformDevice(hbar=50 * J, jsc=J, dh=5 * J, dh1=2.5 * J, dh2=2.5 * J)

if args.compare:
    devices = {
        "soi_sweet_spot": sweet,
        "soi_off_sweet_spot": replace(sweet, phi_so=0.35 * np.pi, theta=0.4 * np.pi),
        "no_soi_large_dh": UniformDevice(hbar=20.0, jsc=J, dh=10.0, dh1=1.0, dh2=1.0, phi_so=0.0),
        "no_soi_small_dh": replace(sweet, phi_so=0.0),
    }
    rows = []
    for name, d in devices.items():
        rep = cz_fidelity(d.spin_params())
        rows.append([name, rep.t_gate, rep.infidelity, rep.leakage_max])
    emit(["device", "t_gate_ns", "infidelity", "leakage_max"], rows, args.out)
else:
    axis = np.linspace(0.35, 0.65, args.points) * np.pi
    rows = []
    for r in fidelity_map(sweet, {"phi_so": axis, "theta": axis}, workers=args.workers):
        rep = r.report
        rows.append([r.point["phi_so"], r.point["theta"], rep.infidelity if rep else None, r.error])
    emit(["phi_so", "theta", "infidelity", "error"], rows, args.out)
