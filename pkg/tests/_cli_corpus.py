"""Command lines exercised by the CLI tests and the determinism check."""

CORPUS = [
    ["gallery", "list"],
    ["gallery", "emit", "eu_not_ii"],
    ["gallery", "emit", "almost_disjoint_family", "--params", '{"count": 3}'],
    ["density", "--set", "factorial_eu_blocks", "--checkpoints", "10,100,3*7!+1"],
    ["density", "--set", "factorial_eu_blocks", "--format", "csv", "--delta", "1/4"],
    ["measures", "--measures", "aud_not_ii", "--blocks", "4"],
    ["construct", "measures-from-weight", "--weight", "affine", "--blocks", "8"],
    ["construct", "weight-from-measures", "--measures", "uniform_doubling", "--blocks", "6", "--format", "csv"],
    ["construct", "regroup", "--measures", "uniform_doubling", "--blocks", "4"],
    ["construct", "rearrange", "--measures", "ii_not_aud", "--blocks", "2"],
    ["probe", "increasing-invariance", "--gallery", "eu_not_ii", "--horizon", "3*8!+1"],
    ["probe", "aud", "--gallery", "ii_not_aud"],
    ["probe", "z-subset", "--weight", "root_floor", "--set", "powers"],
    ["probe", "katetov", "--horizon", "6"],
    ["sigma", "--measures", "aud_not_ii", "--set", "full", "--block", "2"],
    ["star", "--measures", "ii_not_aud", "--set", "ii_not_aud_B", "--m", "2",
     "--n-lo", "1", "--n-hi", "5"],
    ["farah", "--measures", "eu_not_ii", "--blocks", "8"],
]
