from django.template import Template, TemplateDoesNotExist
from django.test import TestCase

from oredyn.template import compiled_template, render_template, template_cache


class CompiledTemplateTest(TestCase):
    def setUp(self) -> None:
        template_cache.clear()

    def test_caches_template(self):
        template = compiled_template("oredyn/document.txt")

        self.assertTrue(isinstance(template, Template))
        self.assertTrue(template_cache["oredyn/document.txt"] is template)
        self.assertTrue(compiled_template("oredyn/document.txt") is template)

    def test_uses_cached_template(self):
        template_cache["custom.txt"] = Template("cached {{ name }}")

        self.assertEqual(
            render_template("custom.txt", {"name": "report"}),
            "cached report",
        )

    def test_renders_without_escaping(self):
        template_cache["custom.txt"] = Template("{{ text }}")

        self.assertEqual(
            render_template("custom.txt", {"text": "u^(-1) < v & w"}),
            "u^(-1) < v & w",
        )

    def test_missing_template(self):
        with self.assertRaises(TemplateDoesNotExist):
            compiled_template("oredyn/missing.txt")

        self.assertTrue("oredyn/missing.txt" not in template_cache)
