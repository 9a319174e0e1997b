"""Junction exchange against phase: closed form and the Hubbard reduction side by side."""

import numpy as np

from _common import emit, parser
from stc.effective import j_of_phi
from stc.hubbard import HubbardParams, exchange_couplings, extract_spin_couplings, sw_reduce

args = parser(__doc__)
args.add_argument("--points", type=int, default=25)
args = args.parse_args()

base = dict(eps=(-20.0, -20.0, -20.0, -20.0), u=200.0, gamma_ca=0.2)
single = exchange_couplings(HubbardParams(**base), "main")[2]
rows = []
for phi in np.linspace(0.0, 2 * np.pi, args.points):
    p = HubbardParams(**base, single_sc=False, phi_u=phi / 2, phi_l=-phi / 2)
    rows.append([phi, float(j_of_phi(single, phi)), extract_spin_couplings(sw_reduce(p), p)["jsc"]])
emit(["phi", "j_closed_form_ueV", "j_hubbard_sw_ueV"], rows, args.out)
