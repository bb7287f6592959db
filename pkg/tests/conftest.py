import math

import pytest

from orthoiir import Band, FilterSpec, design, hp_lp_complement, sweep

# Worked-example inputs: band edges 2.0007 / 2.3186, low-pass levels 1000 / 0,
# high-pass companion levels 1 / 2, twenty series terms on each side.
DEMO_PASS_EDGE = 2.0007
DEMO_STOP_EDGE = 2.3186
DEMO_LP_LEVELS = (1000.0, 0.0)
DEMO_HP_LEVELS = (1.0, 2.0)
DEMO_TERMS = 20


def demo_lp_spec() -> FilterSpec:
    return FilterSpec(
        (
            Band(0.0, DEMO_PASS_EDGE, DEMO_LP_LEVELS[0]),
            Band(DEMO_STOP_EDGE, math.pi, DEMO_LP_LEVELS[1]),
        )
    )


@pytest.fixture(scope="session")
def demo_specs():
    lp = demo_lp_spec()
    return lp, hp_lp_complement(lp, *DEMO_HP_LEVELS)


@pytest.fixture(scope="session")
def demo_report(demo_specs):
    lp, hp = demo_specs
    return design(lp, hp, DEMO_TERMS, DEMO_TERMS, "low_pass")


@pytest.fixture(scope="session")
def demo_curves(demo_report):
    return (
        sweep(demo_report.model_raw, 2048),
        sweep(demo_report.model_stable, 2048),
    )
