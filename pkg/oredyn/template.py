"""
Compiled report templates, cached by name.
"""
from django.template import Context, Template
from django.template.loader import get_template

template_cache = {}


def compiled_template(name: str) -> Template:
    """
    Load the report template ``name`` once and keep the compiled version.
    """
    if name not in template_cache:
        template_cache[name] = get_template(name).template
    return template_cache[name]


def render_template(name: str, context: dict) -> str:
    # reports are plain text
    return compiled_template(name).render(Context(context, autoescape=False))
