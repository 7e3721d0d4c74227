#!/usr/bin/env python3
"""Regenerate newform fixtures with PARI/GP when the LMFDB API is not reachable.

Writes data/lmfdb/N{level}k2.json in the same schema the C++ client caches.
Labels follow the LMFDB convention for trivial character: orbits sorted by
dimension, then by the traces of a_n for n = 1, 2, ... (lexicographic).
"""
import argparse
import json
import pathlib

import cypari2

pari = cypari2.Pari()


def label_suffix(i):
    s = ""
    i += 1
    while i:
        i, r = divmod(i - 1, 26)
        s = chr(ord("a") + r) + s
    return s


def newforms(level, bound):
    mf = pari(f"mfinit([{level},2],0)")
    out = []
    for f in pari.mfeigenbasis(mf):
        coeffs = pari.mfcoefs(f, max(bound, 200))
        charpolys = {}
        traces = []
        for n in range(1, len(coeffs)):
            cp = pari.charpoly(coeffs[n])
            traces.append(-int(pari.polcoef(cp, int(pari.poldegree(cp)) - 1)))
            if n <= bound and pari.isprime(n):
                charpolys[n] = [int(pari.polcoef(cp, k)) for k in range(int(pari.poldegree(cp)) + 1)]
        dim = len(charpolys[2]) - 1
        out.append({"dim": dim, "traces": traces, "charpolys": charpolys})
    out.sort(key=lambda r: (r["dim"], r["traces"]))
    return out


def record(level, i, form, bound):
    return {
        "label": f"{level}.2.a.{label_suffix(i)}",
        "level": level,
        "weight": 2,
        "dim": form["dim"],
        "hecke_bound": bound,
        "ap": [{"p": p, "charpoly": cp} for p, cp in sorted(form["charpolys"].items())],
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("levels", nargs="*", type=int, default=[11, 23, 54, 162])
    ap.add_argument("--bound", type=int, default=100)
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data" / "lmfdb"))
    ap.add_argument("--timestamp", default="2026-10-16T00:00:00Z")
    args = ap.parse_args()
    outdir = pathlib.Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for level in args.levels:
        forms = newforms(level, args.bound)
        doc = {
            "schema": "1",
            "level": level,
            "weight": 2,
            "source": f"pari-gp {pari.version()[0]}.{pari.version()[1]}.{pari.version()[2]} mfeigenbasis",
            "timestamp": args.timestamp,
            "newforms": [record(level, i, f, args.bound) for i, f in enumerate(forms)],
        }
        path = outdir / f"N{level}k2.json"
        path.write_text(json.dumps(doc, indent=2) + "\n")
        print(path, len(forms), [f["dim"] for f in forms])


if __name__ == "__main__":
    main()
