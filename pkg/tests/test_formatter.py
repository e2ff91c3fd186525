from django.test import TestCase, override_settings

from oredyn.cli import parse_input, run
from oredyn.engine import FIELD_HYPOTHESIS
from oredyn.formatter import ReportFormatter, get_report_formatter


LORENZ = '{"family": "monomial", "matrix": [[2, 1], [1, 1]]}'


class UpperFormatter(ReportFormatter):
    def format_json(self, document):
        return super().format_json(document).upper()


class ReportFormatterTest(TestCase):
    def test_json_is_sorted(self):
        self.assertEqual(
            ReportFormatter().format_json({"b": 1, "a": [2]}),
            '{\n  "a": [\n    2\n  ],\n  "b": 1\n}',
        )

    def test_pretty_report(self):
        output = ReportFormatter().format_pretty(run("analyze-t", parse_input(LORENZ)))

        self.assertIn(FIELD_HYPOTHESIS, output)
        self.assertIn("== T = S[t, t^-1; sigma] ==", output)
        self.assertIn("(0) primitive:      Yes", output)
        self.assertIn("DM-equivalence:     Fails (primitive but not locally closed)", output)
        self.assertIn("cited: Lorenz's counterexample", output)

    def test_pretty_combined_report(self):
        output = ReportFormatter().format_pretty(run("report", parse_input(LORENZ)))

        self.assertIn("== T = S[t, t^-1; sigma] ==", output)
        self.assertIn("== U = S[t; sigma] ==", output)

    def test_pretty_document(self):
        output = ReportFormatter().format(run("growth", parse_input(LORENZ)), pretty=True)

        self.assertTrue(output.startswith("oredyn growth (oredyn/1)"))
        self.assertIn("norm_sequence:", output)

    def test_default_formatter(self):
        self.assertIsInstance(get_report_formatter(), ReportFormatter)

    @override_settings(OREDYN={"REPORT_FORMATTER": "tests.test_formatter.UpperFormatter"})
    def test_configured_formatter(self):
        formatter = get_report_formatter()

        self.assertIsInstance(formatter, UpperFormatter)
        self.assertEqual(formatter.format({"a": "b"}), '{\n  "A": "B"\n}')
