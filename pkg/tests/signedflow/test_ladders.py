"""
Signed Ladder Tests
Ladder generation, template flows, extenders and 6-flows over every switching class
"""

import pytest

from signedflow.core.admissibility import is_flow_admissible
from signedflow.core.flows import achieved_k, verify_flow
from signedflow.core.generators import signature_classes
from signedflow.core.ladders import (
    ExtenderSpec,
    LadderKind,
    LadderSpec,
    extend_flow,
    extend_ladder,
    extended_spec,
    gen_ladder,
    ladder_edge,
    recognize_ladder,
    six_nzf_circular,
    six_nzf_ladder,
    six_nzf_moebius,
    template_flow,
)
from signedflow.core.sgraph import switch_at
from signedflow.core.templates import ladder_template, ladder_template_names
from signedflow.exceptions import (
    BasePairNotPositive,
    InputError,
    NotFlowAdmissible,
    TemplatePreconditionViolated,
)
from tests.conftest import trace_cases

pytestmark = pytest.mark.construction

CIRCULAR = LadderKind.CIRCULAR
MOEBIUS = LadderKind.MOEBIUS


def _alternating_rungs(n, negative_cycles=False):
    rung = [1 if i % 2 == 0 else -1 for i in range(n)]
    if not negative_cycles:
        return LadderSpec.from_parts(CIRCULAR, n, rung=rung)
    x = [-1] + [1] * (n - 1)
    return LadderSpec.from_parts(CIRCULAR, n, rung=[-r for r in rung], x=x, y=x)


def _every_class(kind, n):
    for rep in signature_classes(gen_ladder(LadderSpec(kind, n))):
        yield rep, recognize_ladder(rep)


class TestGeneration:
    """Tests for ladder labels and recognition"""

    def test_circular_edge_ids(self):
        g = gen_ladder(LadderSpec(CIRCULAR, 4))
        assert g.edge(ladder_edge(CIRCULAR, 4, "rung", 2)).ends == (2, 6)
        assert g.edge(ladder_edge(CIRCULAR, 4, "x", 3)).ends == (3, 0)
        assert g.edge(ladder_edge(CIRCULAR, 4, "y", 3)).ends == (7, 4)
        assert g.is_cubic()

    def test_moebius_twist(self):
        g = gen_ladder(LadderSpec(MOEBIUS, 3))
        assert g.edge(5).ends == (2, 3)
        assert g.edge(8).ends == (5, 0)
        assert g.is_cubic()

    def test_single_rung_ladders(self):
        """CL_1 is a long barbell, ML_1 a theta graph"""
        assert len(gen_ladder(LadderSpec(CIRCULAR, 1)).vertices) == 4
        theta = gen_ladder(LadderSpec(MOEBIUS, 1))
        assert len(theta.vertices) == 2
        assert len(theta.edges) == 3

    def test_zero_rungs_rejected(self):
        with pytest.raises(InputError):
            LadderSpec(CIRCULAR, 0)

    def test_square_sign(self):
        spec = _alternating_rungs(4)
        assert all(spec.square_sign(i) == -1 for i in range(4))

    @pytest.mark.parametrize("kind, n", [(CIRCULAR, 2), (CIRCULAR, 5), (MOEBIUS, 2), (MOEBIUS, 4)])
    def test_recognize_roundtrip(self, kind, n):
        spec = LadderSpec(kind, n, {0: -1, n: -1})
        assert recognize_ladder(gen_ladder(spec)) == spec

    def test_single_rung_digon_signs(self):
        """Negative second edges of the CL_1 digons survive recognition"""
        spec = LadderSpec(CIRCULAR, 1, {3: -1, 4: -1})
        g = gen_ladder(spec)
        assert g.negative_edges() == (3, 4)
        assert recognize_ladder(g) == spec
        assert spec.to_dict()["digon"] == [-1, -1]
        assert is_flow_admissible(g, certify=False)
        flow, trace = six_nzf_ladder(recognize_ladder(g))
        assert trace.cases == ["long-barbell"]
        assert trace.objects["k"] == 3
        assert verify_flow(g, flow)

    def test_single_rung_mixed_digon(self):
        """One negative edge per digon, split across the x and y sides"""
        g = gen_ladder(LadderSpec(CIRCULAR, 1, {1: -1, 4: -1}))
        flow, _ = six_nzf_ladder(recognize_ladder(g))
        assert verify_flow(g, flow)

    def test_recognize_rejects_other_graphs(self, k4, g3):
        assert recognize_ladder(g3) is None
        assert recognize_ladder(k4) is None


class TestTemplates:
    """Tests for the template flows and their extenders"""

    @pytest.mark.parametrize("name", ladder_template_names())
    def test_template_flow_verifies(self, name):
        spec, flow = template_flow(name)
        template = ladder_template(name)
        assert spec.n == template.n
        assert verify_flow(gen_ladder(spec), flow)
        assert achieved_k(flow) <= template.k

    def test_template_squares_all_unbalanced(self):
        for name in ladder_template_names():
            spec, _ = template_flow(name)
            assert all(spec.square_sign(i) < 0 for i in range(spec.n)), name

    @pytest.mark.parametrize(
        "name", [n for n in ladder_template_names() if n != "negative-cycles-n2"]
    )
    @pytest.mark.parametrize("q", [1, 2, 3])
    def test_extend_flow(self, name, q):
        """Extenders of length 4q keep the template's k"""
        spec, flow = template_flow(name)
        row = ladder_template(name).extender
        extender = ExtenderSpec(spec, row.position, 4 * q)
        extended = extend_flow(flow, extender, row.variant)
        g = extend_ladder(extender)
        assert len(g.vertices) == 2 * (spec.n + 4 * q)
        assert verify_flow(g, extended)
        assert extended.mode == flow.mode

    def test_extended_spec_rungs_alternate(self):
        spec, _ = template_flow("positive-cycles-n4")
        target = extended_spec(ExtenderSpec(spec, 0, 4))
        assert [target.sign("rung", j) for j in range(1, 5)] == [-1, 1, -1, 1]
        assert all(target.square_sign(i) < 0 for i in range(target.n))

    def test_zero_length_extender_is_base(self):
        spec, flow = template_flow("positive-cycles-n4")
        extender = ExtenderSpec(spec, 0, 0)
        assert extend_ladder(extender) == gen_ladder(spec)
        assert extend_flow(flow, extender, 1) is flow

    def test_extender_rejects_length_not_multiple_of_four(self):
        spec, flow = template_flow("positive-cycles-n4")
        with pytest.raises(TemplatePreconditionViolated):
            extend_flow(flow, ExtenderSpec(spec, 0, 2), 1)

    def test_extender_rejects_negative_base_pair(self):
        spec, _ = template_flow("negative-cycles-n4")
        with pytest.raises(BasePairNotPositive):
            extended_spec(ExtenderSpec(spec, 0, 4))

    def test_extender_rejects_unknown_variant(self):
        spec, flow = template_flow("positive-cycles-n4")
        with pytest.raises(InputError):
            extend_flow(flow, ExtenderSpec(spec, 0, 4), 3)


class TestCircularLadders:
    """Tests for 6-flows on circular ladders"""

    @pytest.mark.parametrize(
        "n, negative_cycles, cases",
        [
            (4, False, ["template-positive-cycles-n4"]),
            (8, False, ["template-positive-cycles-n4", "extender"]),
            (6, False, ["template-positive-cycles-n6"]),
            (10, False, ["template-positive-cycles-n6", "extender"]),
            (2, True, ["template-negative-cycles-n2"]),
            (4, True, ["template-negative-cycles-n4"]),
            (8, True, ["template-negative-cycles-n4", "extender"]),
            (6, True, ["template-negative-cycles-n6"]),
        ],
    )
    def test_template_routes(self, n, negative_cycles, cases):
        """Ladders whose squares are all unbalanced go through a template"""
        spec = _alternating_rungs(n, negative_cycles)
        flow, trace = six_nzf_circular(spec)
        assert trace.cases == cases
        assert verify_flow(gen_ladder(spec), flow)

    def test_switched_template_signature(self):
        """A switched copy of a template ladder is pulled back onto the template"""
        g = switch_at(gen_ladder(_alternating_rungs(4)), [0, 5, 6])
        spec = recognize_ladder(g)
        flow, trace = six_nzf_circular(spec)
        assert trace.cases == ["template-positive-cycles-n4"]
        assert verify_flow(g, flow)

    def test_balanced_square_route(self):
        spec = LadderSpec(CIRCULAR, 4, {0: -1, 1: -1})
        flow, trace = six_nzf_circular(spec)
        assert trace.cases == ["balanced-hamiltonian"]
        assert verify_flow(gen_ladder(spec), flow)

    def test_long_barbell_ladder(self):
        """CL_1 with both loops negative has flow number 3"""
        spec = LadderSpec(CIRCULAR, 1, {1: -1, 2: -1})
        flow, trace = six_nzf_circular(spec)
        assert trace.cases == ["long-barbell"]
        assert trace.objects["k"] == 3
        assert verify_flow(gen_ladder(spec), flow)

    def test_inadmissible_ladder_rejected(self):
        """One negative rung on CL_3 leaves a balanced graph once deleted"""
        with pytest.raises(NotFlowAdmissible):
            six_nzf_circular(LadderSpec(CIRCULAR, 3, {0: -1}))

    def test_kind_checked(self):
        with pytest.raises(InputError):
            six_nzf_circular(LadderSpec(MOEBIUS, 3))


class TestMoebiusLadders:
    """Tests for 6-flows on Moebius ladders"""

    def test_balanced_rim(self):
        spec = LadderSpec(MOEBIUS, 3)
        flow, trace = six_nzf_moebius(spec)
        assert trace.cases == ["balanced-rim"]
        assert verify_flow(gen_ladder(spec), flow)

    def test_rerouted_rim(self):
        """An unbalanced rim is rerouted through an unbalanced square"""
        spec = LadderSpec(MOEBIUS, 3, {2: -1, 3: -1})
        flow, trace = six_nzf_moebius(spec)
        assert trace.cases == ["rerouted-rim"]
        assert trace.objects["square"] == 0
        assert verify_flow(gen_ladder(spec), flow)

    def test_theta(self):
        spec = LadderSpec(MOEBIUS, 1)
        flow, trace = six_nzf_moebius(spec)
        assert trace.cases == ["theta"]
        assert verify_flow(gen_ladder(spec), flow)

    def test_kind_checked(self):
        with pytest.raises(InputError):
            six_nzf_moebius(LadderSpec(CIRCULAR, 3))


class TestEverySignature:
    """Every flow-admissible switching class gets a verified 6-flow"""

    def _check(self, kind, n):
        for rep, spec in _every_class(kind, n):
            if not is_flow_admissible(rep, certify=False):
                with pytest.raises(NotFlowAdmissible):
                    six_nzf_ladder(spec)
                continue
            flow, trace = six_nzf_ladder(spec)
            assert verify_flow(rep, flow), spec.to_dict()
            assert achieved_k(flow) <= 6
            assert "search-fallback" not in trace_cases(trace)

    @pytest.mark.parametrize("kind", [CIRCULAR, MOEBIUS])
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_small_ladders(self, kind, n):
        self._check(kind, n)

    @pytest.mark.slow
    @pytest.mark.parametrize("kind", [CIRCULAR, MOEBIUS])
    @pytest.mark.parametrize("n", [5, 6, 7])
    def test_larger_ladders(self, kind, n):
        self._check(kind, n)
