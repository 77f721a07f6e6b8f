from django.apps import AppConfig


class CircleEnvelopesConfig(AppConfig):
    name = 'circle_envelopes'
    verbose_name = 'Circle family envelopes'
