"""Closed-form second-order corrections against the numerical reduction of the spin model."""

import numpy as np

from _common import emit, parser
from stc import Rotation3, SpinParams
from stc.effective import INT2_TERMS, numerical_second_order, second_order_corrections

args = parser(__doc__)
args.add_argument("--draws", type=int, default=10)
args.add_argument("--seed", type=int, default=0)
args = args.parse_args()

rng = np.random.default_rng(args.seed)


def rot():
    return Rotation3.about(rng.normal(size=3), rng.uniform(0, 2 * np.pi))


names = [f"leak{k}" for k in range(4)] + [f"j_{t}" for t in INT2_TERMS]
rows = []
for draw in range(args.draws):
    p = SpinParams(h=np.array([21.0, 19.0, 18.0, 16.0]), j1=0.3, j2=0.25, jsc=0.4, rot1=rot(), rotsc=rot(), rot2=rot())
    leak, inter = numerical_second_order(p)
    closed = {f: second_order_corrections(p, f) for f in ("oracle", "verbatim")}
    for name, num, ora, verb in zip(names, [*leak, *inter],
                                    [*closed["oracle"].leak2, *closed["oracle"].int2],
                                    [*closed["verbatim"].leak2, *closed["verbatim"].int2]):
        rows.append([draw, name, abs(num), abs(ora - num), abs(verb - num)])
emit(["draw", "term", "numerical_abs", "oracle_error", "verbatim_error"], rows, args.out)
