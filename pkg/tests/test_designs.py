import io
from fractions import Fraction as F

import numpy as np
import pytest

from tridesign.designs import (
    DesignFormatError,
    design_strength,
    e8_roots,
    fixture,
    from_gram,
    gram_rank_psd,
    parse_design,
    spectrum,
    verify_conjecture_witness,
    write_design,
)
from tridesign.derived import derived_analysis


def roundtrip(inst, **kw):
    buf = io.StringIO()
    write_design(inst, buf, **kw)
    return parse_design(buf.getvalue())


def test_e8_roots():
    R = np.array(e8_roots())
    assert R.shape == (240, 8)
    assert set((R * R).sum(axis=1)) == {8}
    G = R @ R.T
    assert set(np.unique(G)) == {-8, -4, 0, 4, 8}


def test_e8_derived_56():
    inst = fixture("e8_derived_56")
    assert (inst.n, inst.M, inst.exact) == (7, 56, True)
    spec = spectrum(inst)
    assert spec.constant
    assert spec.per_point[0] == {F(-1): 1, F(-1, 3): 27, F(1, 3): 27}
    assert gram_rank_psd(inst) == 7
    assert design_strength(inst, 7) == 5


def test_hexagon_and_polygons():
    hexagon = fixture("hexagon")
    assert design_strength(hexagon, 8) == 5
    assert design_strength(fixture("heptagon"), 8) == 6
    assert design_strength(fixture("icosahedron"), 8) == 5


@pytest.mark.parametrize("name", ["hexagon", "heptagon", "icosahedron", "e8_derived_56"])
def test_witness_passes_on_fixtures(name):
    rep = verify_conjecture_witness(fixture(name))
    assert rep.passed, {k: v for k, v in rep.items.items() if not v.passed}
    assert set(rep.items) == {"three_distance", "strength", "constant_distribution", "distribution",
                              "levenshtein_roots", "levenshtein_bound"}


def test_witness_precondition_failure():
    rep = verify_conjecture_witness(fixture("e8_roots"))
    assert not rep.passed
    assert list(rep.items) == ["three_distance"]
    assert "4 distinct" in rep.items["three_distance"].detail


def test_fixture_codes_are_not_refuted():
    inst = fixture("e8_derived_56")
    spec = spectrum(inst)
    reports = derived_analysis(inst.n, inst.M, spec.distinct, list(spec.per_point[0].values()))
    assert not any(r.is_contradiction for r in reports)


def test_roundtrip_exact_and_numeric():
    for name in ("hexagon", "e8_derived_56"):
        inst = fixture(name)
        back = roundtrip(inst)
        assert back.exact and back.gram == inst.gram
    ico = fixture("icosahedron")
    back = roundtrip(ico, coords=True)
    assert not back.exact and np.allclose(back.gram_array(), ico.gram_array())


def test_perturbed_hexagon_loses_strength():
    rows = [list(r) for r in fixture("hexagon").gram]
    # rotate point 0 by a small rational-cosine angle: keep Gram valid-looking but break the design
    rows[0][1] = rows[1][0] = F(3, 5)
    inst = from_gram(2, rows, exact=True)
    assert design_strength(inst, 5) < 5


def test_parse_errors():
    with pytest.raises(DesignFormatError, match="header"):
        parse_design("hello\n1 0\n")
    with pytest.raises(DesignFormatError, match="expected 2 rows"):
        parse_design("design coords dim=2 size=2\n1 0\n")
    with pytest.raises(DesignFormatError, match="unit vector"):
        parse_design("design coords dim=2 size=2\n1 0\n1 1\n")
    with pytest.raises(DesignFormatError, match="symmetric"):
        parse_design("design gram dim=2 size=2\n1 1/2\n1/3 1\n")
    with pytest.raises(DesignFormatError, match="exact mode requires rational tokens"):
        parse_design("design coords dim=2 size=2 numeric\n1.0 0.0\n0.0 1.0\n", require_exact=True)
    with pytest.raises(DesignFormatError, match="rank"):
        parse_design("design gram dim=1 size=2\n1 0\n0 1\n")
    with pytest.raises(DesignFormatError, match="semidefinite"):
        parse_design("design gram dim=3 size=3\n1 -1 -1\n-1 1 -1\n-1 -1 1\n")


def test_comments_and_exact_detection():
    inst = parse_design("# square\ndesign coords dim=2 size=4\n1 0\n0 1\n-1 0\n0 -1\n")
    assert inst.exact and design_strength(inst, 5) == 3
