"""SVG rendering: structure, whiskers, reference line, and determinism."""

import pytest

from qdo.analysis import EffectReport
from qdo.chart import render_chart


def _group(label, effect, ci=None):
    if ci is None:
        return EffectReport(label, effect)
    return EffectReport(label, effect, ci_low=ci[0], ci_high=ci[1])


class TestRenderChart:
    def test_four_bars_one_negative(self):
        groups = [
            _group("G=0", 0.167), _group("G=1", 0.295),
            _group("Overall", -0.061), _group("Causal", 0.231),
        ]
        svg = render_chart(groups, title="effects")
        assert svg.count("<rect") == 5  # background + 4 bars
        assert svg.startswith("<svg ") and svg.rstrip().endswith("</svg>")
        assert "-0.061" in svg

    def test_no_ci_no_whiskers(self):
        svg = render_chart([_group("only", 0.2)])
        assert 'class="whisker"' not in svg

    def test_ci_draws_whiskers(self):
        svg = render_chart([_group("g", 0.2, ci=(0.18, 0.22))])
        assert svg.count('class="whisker"') == 3  # stem + two caps

    def test_reference_line_dashed(self):
        svg = render_chart([_group("g", 0.4)], reference=0.486)
        assert 'stroke-dasharray="6,4"' in svg
        assert "+0.486" in svg

    def test_deterministic_output(self):
        groups = [_group("a", 0.1, ci=(0.05, 0.15)), _group("b", -0.2)]
        assert render_chart(groups, title="t", reference=0.3) == render_chart(
            groups, title="t", reference=0.3
        )

    def test_labels_escaped(self):
        svg = render_chart([_group("a<b&c", 0.1)])
        assert "a&lt;b&amp;c" in svg
        assert "a<b" not in svg

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            render_chart([])
