from django import template

register = template.Library()


@register.filter
def verdict(report: dict, field: str) -> str:
    """
    Render a verdict field of a report, with the break or the reason attached.
    """
    value = report.get(field)
    if value is None:
        return ""
    text = str(value).capitalize()
    if field == "dm_verdict" and value == "fails" and report.get("dm_break"):
        return "%s (%s)" % (text, report["dm_break"])
    if value == "unknown" and report.get("reasons", {}).get(field):
        return "%s (%s)" % (text, report["reasons"][field])
    return text


@register.filter
def interval(detail: dict) -> str:
    """
    An algebraic real as ``value, root of poly in [lo, hi]``.
    """
    if not detail:
        return ""
    lo, hi = detail["interval"]
    if lo == hi:
        return detail["value"]
    return "%s (root of %s in [%s, %s], ~%s)" % (detail["value"], detail["poly"], lo, hi, detail["approx"])


@register.filter
def reports(result: dict) -> list:
    if "ring" in result:
        return [result]
    return [result[ring] for ring in ("T", "U") if ring in result]


@register.filter
def lines(value, indent: int = 0) -> str:
    """
    Flatten nested JSON data into indented ``key: value`` lines.
    """
    pad = "  " * int(indent)
    if isinstance(value, dict):
        out = []
        for key in sorted(value):
            item = value[key]
            if isinstance(item, (dict, list)) and item:
                out.append("%s%s:" % (pad, key))
                out.append(lines(item, int(indent) + 1))
            else:
                out.append("%s%s: %s" % (pad, key, _scalar(item)))
        return "\n".join(out)
    if isinstance(value, list):
        out = []
        for item in value:
            if isinstance(item, (dict, list)) and item:
                out.append("%s-" % pad)
                out.append(lines(item, int(indent) + 1))
            else:
                out.append("%s- %s" % (pad, _scalar(item)))
        return "\n".join(out)
    return pad + _scalar(value)


def _scalar(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (dict, list)):
        return "none"
    return str(value)
