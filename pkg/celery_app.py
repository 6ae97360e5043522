"""
Celery application shared by the sweep dispatcher and the workers.
"""

from celery import Celery

from config import get_config

config = get_config()

celery = Celery(
    'tasks',
    broker=config['CELERY_BROKER_URL'],
    backend=config['CELERY_RESULT_BACKEND'],
    include=['tasks']
)

celery.conf.update(
    task_serializer='json',
    accept_content=['json'],
    result_serializer='json',
    timezone='UTC',
    enable_utc=True,
)
