import pytest

from latforge.closure import Answer, generates_whole
from latforge.constructions import (
    ConfigFile,
    DeltaSpec,
    build_delta,
    build_glued,
    build_one_point_extension,
    build_zadori,
    default_delta_spec,
    default_gluing,
    delta_checks,
    dumps_cfg,
    glued_size,
    loads_cfg,
    quo_prime,
)
from latforge.experiments import extension_checks, extension_delta_spec, zadori_generators
from latforge.relation import Family, LatticeError, atom, block_of, diagonal, is_member, join
from latforge.search import is_one_one_two, one_one_two_labelling


def test_zadori_shape():
    c = build_zadori(3)
    assert c.ground.labels == ("a0", "a1", "a2", "a3", "b0", "b1", "b2")
    v = c.vertex
    assert block_of(c.alpha, v("a0")) == {v("a0"), v("a1"), v("a2"), v("a3")}
    assert block_of(c.beta, v("a1")) == {v("a1"), v("b1")}
    assert block_of(c.gamma, v("a1")) == {v("a1"), v("b0")}
    assert block_of(c.gamma, v("a0")) == {v("a0")}
    assert all(is_member(Family.EQU, r) for r in c.generators().values())
    with pytest.raises(LatticeError):
        build_zadori(1)


@pytest.mark.parametrize("n", [2, 3])
def test_zadori_generates_equ(n):
    c = build_zadori(n)
    v = generates_whole(zadori_generators(c), Family.EQU)
    assert v.answer is Answer.YES
    assert v.closure.stats["elements"] <= {2: 52, 3: 877}[n]


def test_zadori_without_corner_atoms_does_not_generate():
    c = build_zadori(2)
    assert generates_whole([c.alpha, c.beta, c.gamma], Family.EQU).answer is Answer.NO


@pytest.mark.parametrize("n", range(6, 11))
def test_delta_identities(n):
    c = build_zadori(n)
    checks = delta_checks(c, build_delta(c))
    assert checks == dict.fromkeys(checks, True)


def test_delta_needs_rank_four():
    with pytest.raises(LatticeError):
        default_delta_spec(build_zadori(3))


def test_delta_fits_the_one_one_two_pattern():
    c = build_zadori(6)
    d = build_delta(c)
    gens = [c.alpha, c.beta, c.gamma, d]
    assert is_one_one_two(gens)
    assert one_one_two_labelling(gens)[:2] == (3, 0)  # delta < alpha
    assert not is_one_one_two([c.alpha, c.beta, c.gamma, diagonal(c.ground)])
    with pytest.raises(LatticeError):
        is_one_one_two(gens[:3])


def test_glued_configuration():
    c = build_glued(default_gluing(16))
    assert c.ground.size == glued_size((13, 16)) == 60
    assert glued_size((13, 13)) == 54
    g = c.ground
    assert (g.index("b0_9"), g.index("a1_11")) in c.gamma
    assert c.conjectural
    d = build_delta(c, default_delta_spec(c))
    assert is_member(Family.QUO, d) and not is_member(Family.EQU, d)


def test_one_point_extension():
    c = build_one_point_extension(build_zadori(2))
    assert c.ground.size == 6 and c.ground.label(c.extension_vertex) == "x"
    d = build_delta(c, extension_delta_spec(c))
    checks = extension_checks(c, d)
    assert checks == dict.fromkeys(checks, True)


def test_diagonal_delta_never_generates_on_extension():
    c = build_one_point_extension(build_zadori(2))
    v = generates_whole([c.alpha, c.beta, c.gamma, diagonal(c.ground)], Family.QUO)
    assert v.answer is Answer.NO


def test_quo_prime_isolates_x():
    c = build_one_point_extension(build_zadori(2))
    d = build_delta(c, extension_delta_spec(c))
    x = c.extension_vertex
    eps = join(Family.QUO, [atom(Family.QUO, x, 0, c.ground), atom(Family.QUO, 1, x, c.ground)])
    assert block_of(quo_prime(eps, c.alpha, d), x) == {x}


def test_cfg_round_trip_and_build():
    text = "# extension\nzadori 2\nextend a0 beta\nextend a2 g\ndelta atom quo a0 b0\ndelta atom QUO b0 a2\n"
    cfg = loads_cfg(text)
    assert cfg.kind == "zadori" and cfg.extend == [("a0", "beta"), ("a2", "gamma")]
    assert loads_cfg(dumps_cfg(cfg)) == cfg
    config, delta = cfg.build()
    assert config.kind == "extension"
    assert delta == build_delta(config, DeltaSpec((("QUO", "a0", "b0"), ("QUO", "b0", "a2"))))


def test_cfg_glue():
    cfg = loads_cfg("glue 13 14\nedge b0_9 a1_11 gamma\n")
    config, delta = cfg.build()
    assert config.ground.size == 27 + 29 and delta is None
    assert dumps_cfg(cfg).startswith("glue 13 14")


@pytest.mark.parametrize(
    "bad",
    ["", "zadori 2\nzadori 3\n", "zadori 2\nedge a0 a1 purple\n", "zadori x\n", "zadori 2\nfrobnicate\n",
     "zadori 2 3\n"],
)
def test_cfg_errors(bad):
    with pytest.raises(LatticeError):
        loads_cfg(bad).build()


def test_cfg_dataclass_defaults():
    assert ConfigFile().kind == "zadori"
