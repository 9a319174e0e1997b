"""Hubbard-to-spin reduction check at shrinking tunneling, plus the Andreev denominator arbitration."""

import warnings

import numpy as np

from _common import emit, parser
from stc.hubbard import HubbardParams, sw_verify
from stc.spin import Rotation3

args = parser(__doc__)
args.add_argument("--levels", type=int, default=3)
args = args.parse_args()

p = HubbardParams(eps=(-20.0, -20.0, -20.0, -20.0), u=200.0, t1=0.2, t2=0.2, gamma_ca=0.2,
                  rot1=Rotation3((1.0, 0.0, 0.0), np.pi / 2), rot2=Rotation3((1.0, 0.0, 0.0), np.pi / 2),
                  rot_ca=Rotation3((1.0, 0.0, 0.0), np.pi))
with warnings.catch_warnings():
    warnings.simplefilter("ignore", RuntimeWarning)
    rep = sw_verify(p, levels=args.levels)
rows = [[lv.scale, lv.sw2_relative, lv.exact_absolute, lv.exact_relative] for lv in rep.levels]
emit(["scale", "sw2_relative", "exact_absolute", "exact_relative"], rows, args.out)
print(f"fitted order {rep.fitted_order:.3f}; winner {rep.winner}; scores {rep.arbitration}")
