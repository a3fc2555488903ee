"""
Celery application for irslab_backend.

Workers execute stored experiment runs (see experiments.tasks):

    celery -A irslab_backend worker -l info
"""

import os

from celery import Celery

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'irslab_backend.settings')

app = Celery('irslab_backend')
app.config_from_object('django.conf:settings', namespace='CELERY')
app.autodiscover_tasks()
