from django.apps import AppConfig


class NestedConesConfig(AppConfig):
    name = "nestedcones"
    verbose_name = "django-nested-cones"
