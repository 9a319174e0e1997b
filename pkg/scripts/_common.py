import argparse
import sys

from stc.cli import Table, to_csv


def parser(description):
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--out", help="CSV path (default stdout)")
    return p


def emit(columns, rows, out=None):
    text = to_csv(Table(columns, rows))
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
