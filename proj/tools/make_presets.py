"""Writes presets/*.json: one sample point per family plus named models."""

import cmath
import json
import math
import pathlib

OUT = pathlib.Path(__file__).resolve().parent.parent / "presets"


def c(z):
    z = complex(z)
    return [z.real, z.imag]


def preset(name, family, free, branch=0):
    return {"name": name, "family": family, "branch": branch,
            "free": {k: c(v) for k, v in free.items()}}


J = cmath.exp(2j * math.pi / 3)


def martins_1a(k=1.7, eps1=1):
    amp = cmath.exp(-1j * math.pi / 4 * (1 - eps1)) * 2 * k / (k * k - 1)
    return preset("Martins 1A", "gZF", {
        "p": 2 * k**2 / (k**4 - 1), "tp": -2 * eps1 * k**2 / (k**4 - 1), "t2": amp, "s1": amp})


def martins_2a(name, k=1.6, eps1=1, eps2=1, branch=1):
    d = eps1 * k ** (-2 * eps2)
    return preset(name, "gIK", {
        "p": 2 * k**2 / (k**4 - 1),
        "tp": 2 * k**4 / ((k**6 + eps1) * (k**2 - eps1)),
        "t2": -cmath.exp(-1j * math.pi / 4 * (1 - eps1)) * 2 * k / (k**6 + eps1),
        "v": d / (d * d - d + 1)}, branch)


def bariev(tp=1.8):
    r = math.sqrt(tp * tp - 1)
    return preset("Bariev", "gB", {"p": 1, "q": 1, "tp": tp, "t1": -J * J * r, "t2": J * r}, 1)


def mb5(e1=2.0, e2=1.5, tp=0.7):
    r = math.sqrt(e1 * e2 - 1)
    return preset("MB5", "gB", {
        "p": -e2, "q": -e1, "tp": tp,
        "t1": (math.sqrt(3) - 1j) / 2 * r, "t2": (math.sqrt(3) + 1j) / 2 * r}, 1)


def martins_2b(e1=1, e2=1, branch=1):
    return preset("Martins 2B", "gB", {
        "p": -2j, "q": -2j, "tp": -1j * e1 * math.sqrt(3),
        "t1": e1 * e2 * cmath.exp(-2j * e2 * math.pi / 3),
        "t2": e1 * e2 * cmath.exp(2j * e2 * math.pi / 3)}, branch)


def sb5_special(lam=0.5, branch=1):
    w = cmath.exp(-2j * math.pi / 3)
    return preset("SB5 special point", "SB5", {"p": w, "q": -1, "t2": w, "Y": 4 * lam}, branch)


PRESETS = {
    # Generic points of each family.
    "gZF": preset("gZF sample", "gZF", {"p": 1 + 0.2j, "tp": 0.3 + 0.1j, "t2": 0.7 - 0.2j, "s1": 0.5 + 0.5j}),
    "gIK": preset("gIK sample", "gIK", {"p": 1, "tp": 0.6 + 0.2j, "t2": 0.8 - 0.1j, "v": 0.4 + 0.3j}, 1),
    "gB": preset("gB sample", "gB", {"p": 1, "q": 0.7 + 0.3j, "tp": 0.5 - 0.4j, "t1": 0.9, "t2": 0.6 + 0.5j}, 1),
    "SpR": preset("SpR sample", "SpR", {"p": 1, "q": 0.8 - 0.2j, "tp": 0.4 + 0.3j, "t2": 0.7, "t3": 0.5 + 0.6j}),
    "SB5": preset("SB5 sample", "SB5", {"p": 1, "q": 0.6 + 0.4j, "t2": 0.8 - 0.3j, "Y": 0.9 + 0.2j}, 1),
    "17V1a": preset("17V1a sample", "17V1a", {"p": 1, "q": 0.7 + 0.2j, "tp": 0.6 - 0.3j, "t2": 0.9}, 1),
    "17V1b": preset("17V1b sample", "17V1b", {"p": 1, "tp": 0.6 + 0.4j, "t2": 0.8}, 1),
    "17V2": preset("17V2 sample", "17V2", {"p": 1, "q": 0.5 - 0.5j, "tp": 0.7 + 0.1j, "t2": 0.6}),
    "14V1": preset("14V1 sample", "14V1", {"p": 1, "tp": 0.6 + 0.2j, "t2": 0.9, "X22": 0.4 - 0.7j}, 1),
    "14V2": preset("14V2 sample", "14V2", {"p": 1, "tp": 0.5 + 0.5j, "t2": 0.8}),
    # Named models.
    "zf": preset("ZF", "gZF", {"p": 1, "tp": -1, "t2": 0.8, "s1": 0.6}),
    "martins_1a": martins_1a(),
    "ik_a22": martins_2a("IK / A2(2)"),
    "martins_2a": martins_2a("Martins 2A", eps1=-1),
    "martins_1b": preset("Martins 1B", "SpR", {
        "p": -2j, "q": -2j, "t2": 2, "t3": 2j, "tp": -2j * math.sqrt(3)}),
    "martins_2b": martins_2b(),
    "mb5": mb5(),
    "sb5_special": sb5_special(),
    "bariev": bariev(),
}


def main():
    OUT.mkdir(exist_ok=True)
    for stem, data in PRESETS.items():
        (OUT / f"{stem}.json").write_text(json.dumps(data, indent=2) + "\n")


if __name__ == "__main__":
    main()
