from django.template import Context, Template
from django.test import TestCase

from oredyn.templatetags.oredyn import interval, lines, reports, verdict


class VerdictFilterTest(TestCase):
    def test_plain(self):
        self.assertEqual(verdict({"zero_primitive": "yes"}, "zero_primitive"), "Yes")

    def test_break_is_attached(self):
        report = {"dm_verdict": "fails", "dm_break": "rational but not primitive"}

        self.assertEqual(verdict(report, "dm_verdict"), "Fails (rational but not primitive)")

    def test_reason_is_attached(self):
        report = {"zero_rational": "unknown", "reasons": {"zero_rational": "no certificate"}}

        self.assertEqual(verdict(report, "zero_rational"), "Unknown (no certificate)")

    def test_missing_field(self):
        self.assertEqual(verdict({}, "dm_verdict"), "")

    def test_in_template(self):
        template = Template('{% load oredyn %}{{ report|verdict:"dm_verdict" }}')

        self.assertEqual(template.render(Context({"report": {"dm_verdict": "holds"}})), "Holds")


class IntervalFilterTest(TestCase):
    def test_rational(self):
        self.assertEqual(interval({"value": "1", "interval": ["1", "1"]}), "1")

    def test_irrational(self):
        detail = {
            "value": "3/2 + sqrt(5)/2",
            "poly": "lambda**2 - 3*lambda + 1",
            "interval": ["2", "3"],
            "approx": "2.618034",
        }

        self.assertEqual(
            interval(detail),
            "3/2 + sqrt(5)/2 (root of lambda**2 - 3*lambda + 1 in [2, 3], ~2.618034)",
        )

    def test_empty(self):
        self.assertEqual(interval({}), "")


class ReportsFilterTest(TestCase):
    def test_single_report(self):
        self.assertEqual(reports({"ring": "T"}), [{"ring": "T"}])

    def test_combined_report(self):
        self.assertEqual(
            reports({"growth": {}, "U": {"ring": "U"}, "T": {"ring": "T"}}),
            [{"ring": "T"}, {"ring": "U"}],
        )


class LinesFilterTest(TestCase):
    def test_nested(self):
        self.assertEqual(
            lines({"b": [1, 2], "a": None, "c": {"d": True}, "e": []}),
            "a: -\nb:\n  - 1\n  - 2\nc:\n  d: yes\ne: none",
        )

    def test_indent(self):
        self.assertEqual(lines([{"x": 1}], 1), "  -\n    x: 1")
