"""Seeded searches for valid configurations and the shipped canonical fixtures."""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .geometry import FrameConfig, SurfaceChart, validate_incidence
from .lattice import EvenLattice
from .quadspace import InnerProductSpace
from .theta import validate_pairs

FIXTURE_FILE = "fixture.json"


def checkerboard_basis(p, q):
    """Basis (columns) of D_n = {x in Z^n : sum x even}, n = p + q; even for diag(1^p, (-1)^q)."""
    n = p + q
    B = np.zeros((n, n))
    for i in range(n - 1):
        B[i, i], B[i + 1, i] = 1, -1
    B[n - 2, n - 1], B[n - 1, n - 1] = 1, 1
    return B


def diagonal_space(p, q):
    return InnerProductSpace(np.diag([1.0] * p + [-1.0] * q))


def search_incidence(seed, box=3, max_tries=10 ** 6):
    """First integer sample (C1, C2, C1', C2') with entries in [-box, box] passing every check.

    Returns (vectors, tries).
    """
    V = diagonal_space(2, 2)
    rng = np.random.default_rng(seed)
    for tries in range(1, max_tries + 1):
        Cs = rng.integers(-box, box + 1, size=(4, 4)).astype(float)
        if not all(V.inner(c, c) < 0 for c in Cs):
            continue
        if not validate_incidence(*Cs, V).passed:
            continue
        try:
            SurfaceChart(FrameConfig.build(*Cs, V))
        except ValueError:
            continue
        return Cs, tries
    raise RuntimeError("no configuration found")


def search_pairs(seed, r=3, axis=9, spread=3, max_tries=10 ** 6):
    """First sample of r pairs in diag(1^r, (-1)^r) passing validate_pairs.

    C_j, C_j' = axis * e_{r+j} +- spread * e_j, each plus integer noise in
    {-1, 0, 1}: a perturbed product of r hyperbolic planes, so that lattice
    vectors spacelike in every block have Phi_r != 0. Returns (pairs, tries).
    """
    V = diagonal_space(r, r)
    n = 2 * r
    E = np.eye(n)
    rng = np.random.default_rng(seed)
    for tries in range(1, max_tries + 1):
        pairs = []
        for j in range(r):
            c = axis * E[r + j] + spread * E[j] + rng.integers(-1, 2, n)
            cp = axis * E[r + j] - spread * E[j] + rng.integers(-1, 2, n)
            pairs.append((c.astype(float), cp.astype(float)))
        if validate_pairs(pairs, V).passed:
            return pairs, tries
    raise RuntimeError("no configuration found")


def stretched_checkerboard_basis(p, q, stretch=3):
    """D_n with its first coordinate multiplied by stretch.

    For odd r every coset of D_n is its own negative and Phi_r(-x) = -Phi_r(x),
    so the Phi_r series vanishes identically; the stretch adds cosets with mu != -mu.
    """
    B = checkerboard_basis(p, q)
    B[0] *= stretch
    return B


@dataclass
class Fixture:
    V: InnerProductSpace
    config: FrameConfig
    lattice: EvenLattice
    seed: int


@dataclass
class PairsFixture:
    V: InnerProductSpace
    pairs: list
    lattice: EvenLattice
    seed: int


def load_data():
    text = resources.files("kmtheta").joinpath("data", FIXTURE_FILE).read_text()
    return json.loads(text)


def canonical_fixture() -> Fixture:
    """The (2,2) configuration in diag(1,1,-1,-1) with the checkerboard lattice D4."""
    d = load_data()["signature_2_2"]
    V = diagonal_space(2, 2)
    C = d["C"]
    config = FrameConfig.build(C["c1"], C["c2"], C["c1p"], C["c2p"], V)
    return Fixture(V, config, EvenLattice(np.array(d["lattice_basis"], dtype=float), V), d["seed"])


def rank3_fixture() -> PairsFixture:
    """Three pairs in diag(1,1,1,-1,-1,-1) with D6 stretched by 3 along e1."""
    d = load_data()["signature_3_3"]
    V = diagonal_space(3, 3)
    pairs = [(np.array(a, dtype=float), np.array(b, dtype=float)) for a, b in d["pairs"]]
    return PairsFixture(V, pairs, EvenLattice(np.array(d["lattice_basis"], dtype=float), V), d["seed"])


def build_data(seed22=1, seed33=0):
    """Regenerate the contents of the shipped fixture file."""
    Cs, tries = search_incidence(seed22)
    pairs, tries3 = search_pairs(seed33)
    return {
        "signature_2_2": {
            "seed": seed22, "box": 3, "tries": tries,
            "C": {k: [int(v) for v in c] for k, c in zip(("c1", "c2", "c1p", "c2p"), Cs)},
            "lattice_basis": checkerboard_basis(2, 2).astype(int).tolist(),
        },
        "signature_3_3": {
            "seed": seed33, "axis": 9, "spread": 3, "tries": tries3,
            "pairs": [[[int(v) for v in a], [int(v) for v in b]] for a, b in pairs],
            "lattice_basis": stretched_checkerboard_basis(3, 3).astype(int).tolist(),
        },
    }
