import json

from django.utils.module_loading import import_string

from oredyn.conf import app_settings
from oredyn.template import render_template

REPORT_TEMPLATES = {
    "analyze-t": "oredyn/report.txt",
    "analyze-u": "oredyn/report.txt",
    "report": "oredyn/report.txt",
}
DEFAULT_TEMPLATE = "oredyn/document.txt"


class ReportFormatter:
    """
    The default report formatter.
    """

    def format_json(self, document: dict) -> str:
        """
        Deterministic JSON: sorted keys, two-space indent.
        """
        return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False)

    def format_pretty(self, document: dict) -> str:
        """
        Human-readable rendering through the report templates.
        """
        name = REPORT_TEMPLATES.get(document.get("command"), DEFAULT_TEMPLATE)
        return render_template(name, {"document": document})

    def format(self, document: dict, pretty: bool = False) -> str:
        return self.format_pretty(document) if pretty else self.format_json(document)


def get_report_formatter():
    """
    Returns an instance of the currently configured report formatter.
    """
    return import_string(app_settings.REPORT_FORMATTER)()
