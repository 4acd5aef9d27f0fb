#!/usr/bin/env python3
"""Regenerates the problem files under fixtures/."""

import json
import math
import pathlib

import numpy as np

OUT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def cmat(m):
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def cvec(v):
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex)]


I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]])
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0])


def spin(a):
    return (I2 + math.cos(a) * Z + math.sin(a) * X) / 2


def write(name, problem):
    (OUT / name).write_text(json.dumps(problem, indent=1) + "\n")


def pauli():
    r = 1 / math.sqrt(2)
    write("pauli.json", {
        "dimension": 2,
        "operators": {"Z": cmat(Z), "X": cmat(X), "Y": cmat(Y), "I": cmat(I2),
                      "H": cmat([[0.5, 1 - 0.25j], [1 + 0.25j, -1.5]])},
        "states": {"up": cvec([1, 0]), "plus": cvec([1, 1]), "plus_i": cvec([r, 1j * r])},
        "borel_sets": {
            "positive": [{"lo": 0, "hi": "inf"}],
            "minus_one": [{"point": -1}],
            "unit_ball": [{"lo": -1, "hi": 1, "lo_closed": True, "hi_closed": True}],
        },
        "functions": {
            "square": {"interpolate": {"x": [-1, 0, 1], "y": [1, 0, 1]}},
            "shift": {"affine": [2, 1]},
            "clamp": {"breakpoints": [0], "pieces": [[0, 0], [1, 0]], "values": [0]},
        },
        "experiments": [
            {"command": "spectra", "operator": "Z"},
            {"command": "spectra", "operator": "X"},
            {"command": "spectra", "operator": "H"},
            {"command": "prob", "operator": "Z", "state": "plus", "borel": "positive"},
            {"command": "prob", "operator": "X", "state": "up", "borel": "minus_one"},
            {"command": "prob", "operator": "H", "state": "plus_i", "borel": "unit_ball"},
            {"command": "quantile", "operator": "Z", "state": "plus"},
            {"command": "quantile", "operator": "Z", "state": "plus", "function": "square"},
            {"command": "quantile", "operator": "H", "state": "plus_i", "function": "clamp"},
            {"command": "verify", "operator": "Z", "state": "plus", "samples": 100000, "seed": 42},
            {"command": "verify", "operator": "Z", "state": "up", "samples": 1000, "seed": 7},
            {"command": "verify", "operator": "H", "state": "plus_i", "function": "shift", "samples": 50000,
             "seed": 3},
            {"command": "roundtrip", "operator": "Z"},
            {"command": "roundtrip", "operator": "Z", "function": "square"},
            {"command": "roundtrip", "operator": "H", "function": "clamp"},
        ],
    })


def diag():
    write("diag.json", {
        "dimension": 3,
        "operators": {"D": cmat(np.diag([2.0, 2.0, 5.0]))},
        "states": {"e0": cvec([1, 0, 0]), "mixed": cvec([1, 1, 1])},
        "borel_sets": {"low": [{"hi": 3}]},
        "functions": {"step": {"breakpoints": [3], "pieces": [[0, 0], [0, 1]], "values": [0]}},
        "experiments": [
            {"command": "spectra", "operator": "D"},
            {"command": "prob", "operator": "D", "state": "mixed", "borel": "low"},
            {"command": "quantile", "operator": "D", "state": "mixed", "function": "step"},
            {"command": "verify", "operator": "D", "state": "e0", "samples": 1000, "seed": 1},
            {"command": "roundtrip", "operator": "D", "function": "step"},
        ],
    })


def random8():
    rng = np.random.default_rng(20240611)
    a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    t = (a + a.conj().T) / 2
    h = rng.normal(size=8) + 1j * rng.normal(size=8)
    write("random8.json", {
        "dimension": 8,
        "operators": {"T": cmat(t)},
        "states": {"h": cvec(h)},
        "borel_sets": {"nonneg": [{"lo": 0, "lo_closed": True}]},
        "functions": {"abs": {"interpolate": {"x": [-1, 0, 1], "y": [1, 0, 1]}}},
        "experiments": [
            {"command": "spectra", "operator": "T"},
            {"command": "prob", "operator": "T", "state": "h", "borel": "nonneg"},
            {"command": "quantile", "operator": "T", "state": "h", "function": "abs"},
            {"command": "verify", "operator": "T", "state": "h", "samples": 100000, "seed": 8},
            {"command": "roundtrip", "operator": "T", "function": "abs"},
        ],
    })


def singlet():
    e = [np.kron(spin(a), I2) for a in (0.0, math.pi / 2)]
    f = [np.kron(I2, spin(b)) for b in (math.pi / 4, 3 * math.pi / 4)]
    write("singlet_chsh.json", {
        "dimension": 4,
        "operators": {"E1": cmat(e[0]), "E2": cmat(e[1]), "F1": cmat(f[0]), "F2": cmat(f[1])},
        "states": {"singlet": cvec([0, 1, -1, 0])},
        "experiments": [
            {"command": "chsh", "E1": "E1", "E2": "E2", "F1": "F1", "F2": "F2", "state": "singlet"},
        ],
    })


def commuting():
    up, down = spin(0.0), spin(math.pi)
    rng = np.random.default_rng(7)
    h = rng.normal(size=4) + 1j * rng.normal(size=4)
    write("commuting_chsh.json", {
        "dimension": 4,
        "operators": {"E1": cmat(np.kron(up, I2)), "E2": cmat(np.kron(down, I2)),
                      "F1": cmat(np.kron(I2, up)), "F2": cmat(np.kron(up, up)), "I": cmat(np.eye(4))},
        "states": {"h": cvec(h), "singlet": cvec([0, 1, -1, 0])},
        "experiments": [
            {"command": "chsh", "E1": "E1", "E2": "E2", "F1": "F1", "F2": "F2", "state": "h"},
            {"command": "chsh", "E1": "E1", "E2": "E2", "F1": "F1", "F2": "F2", "state": "singlet"},
            {"command": "chsh", "E1": "I", "E2": "I", "F1": "I", "F2": "I", "state": "h"},
        ],
    })


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    pauli()
    diag()
    random8()
    singlet()
    commuting()
