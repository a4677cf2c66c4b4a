#!/usr/bin/env python3
"""Regenerates the JSON/CSV fixtures in this directory.

The Iris-scale models are hand-built from thermometer thresholds, not
trained. Feature index = 4 * attribute + threshold index; bit = value > t.
"""
import json
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent
THRESHOLDS = [
    [5.0, 5.5, 6.0, 6.5],  # sepal length
    [2.8, 3.0, 3.2, 3.4],  # sepal width
    [2.5, 4.0, 4.9, 5.5],  # petal length
    [0.6, 1.2, 1.6, 2.0],  # petal width
]
SAMPLES = [
    ([6.3, 3.3, 6.0, 2.5], 2),
    ([5.1, 3.5, 1.4, 0.2], 0),
    ([7.0, 3.2, 4.7, 1.4], 1),
    ([6.4, 3.2, 4.5, 1.5], 1),
]
F = 16


def booleanize(raw):
    return [int(v > t) for v, ts in zip(raw, THRESHOLDS) for t in ts]


def mask(pos=(), neg=(), f=F):
    """Exclude-mask string including x_i for i in pos and !x_i for i in neg."""
    bits = ["1"] * (2 * f)
    for i in pos:
        bits[2 * i] = "0"
    for i in neg:
        bits[2 * i + 1] = "0"
    return "".join(bits)


# Per-class pattern clauses: (included positive features, included negated features).
SETOSA = [((), (8,)), ((), (12,)), ((), (8, 12)), ((), (9, 13)), ((6,), (8,)), ((), (9,))]
VERSICOLOR = [((8,), (10,)), ((12,), (14,)), ((8, 12), (10, 14)), ((9,), (11,)),
              ((12,), (15,)), ((8,), (14,))]
VIRGINICA = [((10,), ()), ((14,), ()), ((10, 14), ()), ((11,), ()), ((15,), ()), ((13, 10), ())]
PATTERNS = [SETOSA, VERSICOLOR, VIRGINICA]


def iris_multiclass():
    masks = []
    for cls in range(3):
        others = [p for c, group in enumerate(PATTERNS) if c != cls for p in group]
        for j in range(12):
            if j % 2 == 0:  # positive clause votes for this class
                pos, neg = PATTERNS[cls][j // 2]
            else:           # negative clause votes against it
                pos, neg = others[j // 2 * 2 % len(others)]
            masks.append(mask(pos, neg))
    return {"variant": "multiclass", "num_features": F, "num_clauses": 12, "num_classes": 3,
            "exclude_masks": masks}


def iris_coalesced():
    clauses = [SETOSA[0], SETOSA[1], VERSICOLOR[0], VERSICOLOR[1], VIRGINICA[0], VIRGINICA[1],
               SETOSA[3], VERSICOLOR[2], VIRGINICA[2], VERSICOLOR[3], VIRGINICA[3], ((6,), ())]
    weights = [
        [6, 5, -3, -4, -6, -5, 4, -3, -6, -2, -4, 2],
        [-4, -5, 6, 5, -3, -4, -2, 7, -5, 4, -3, -1],
        [-6, -4, -2, -3, 6, 5, -3, -4, 7, -2, 5, -1],
    ]
    return {"variant": "coalesced", "num_features": F, "num_clauses": 12, "num_classes": 3,
            "exclude_masks": [mask(p, n) for p, n in clauses], "weights": weights}


def random_multiclass(rng, f, c, k):
    masks = ["".join(rng.choice("1110") for _ in range(2 * f)) for _ in range(k * c)]
    return {"variant": "multiclass", "num_features": f, "num_clauses": c, "num_classes": k,
            "exclude_masks": masks}


def random_coalesced(rng, f, c, k):
    masks = ["".join(rng.choice("1110") for _ in range(2 * f)) for _ in range(c)]
    weights = [[rng.randint(-7, 7) for _ in range(c)] for _ in range(k)]
    return {"variant": "coalesced", "num_features": f, "num_clauses": c, "num_classes": k,
            "exclude_masks": masks, "weights": weights}


def dump(name, obj):
    (HERE / name).write_text(json.dumps(obj, indent=1) + "\n")


def main():
    dump("iris_multiclass.json", iris_multiclass())
    dump("iris_coalesced.json", iris_coalesced())

    dump("small_multiclass.json", {
        "variant": "multiclass", "num_features": 2, "num_clauses": 2, "num_classes": 2,
        "exclude_masks": ["0110", "1001", "1001", "0110"]})
    dump("small_coalesced.json", {
        "variant": "coalesced", "num_features": 2, "num_clauses": 3, "num_classes": 3,
        "exclude_masks": ["0111", "1101", "1010"],
        "weights": [[3, -2, 1], [-1, 4, -2], [2, 2, -5]]})

    rng = random.Random(20261019)
    dump("mc_f4_c6_k3.json", random_multiclass(rng, 4, 6, 3))
    dump("mc_f3_c4_k2.json", random_multiclass(rng, 3, 4, 2))
    dump("co_f4_c6_k3.json", random_coalesced(rng, 4, 6, 3))
    dump("co_f3_c5_k2.json", random_coalesced(rng, 3, 5, 2))

    header = "sepal_length,sepal_width,petal_length,petal_width,label\n"
    (HERE / "iris4_raw.csv").write_text(
        header + "".join(",".join(map(str, raw)) + f",{lab}\n" for raw, lab in SAMPLES))
    names = ",".join(f"x{i}" for i in range(F))
    (HERE / "iris4.csv").write_text(
        names + ",label\n" +
        "".join(",".join(map(str, booleanize(raw))) + f",{lab}\n" for raw, lab in SAMPLES))
    (HERE / "iris_thresholds.txt").write_text(
        ";".join(",".join(str(t) for t in ts) for ts in THRESHOLDS) + "\n")
    (HERE / "small2.csv").write_text("x0,x1,label\n0,0,0\n0,1,1\n1,0,0\n1,1,1\n")


if __name__ == "__main__":
    main()
