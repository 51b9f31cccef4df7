"""
Django settings for the maslovkit project.

The project has no web surface: Django hosts the Orbits app, its management
command and its test runner. Settings keep to what those need.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

from pathlib import Path
import os
from dotenv import load_dotenv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Load environment variables from .env file
load_dotenv(BASE_DIR / '.env')

SECRET_KEY = os.getenv('DJANGO_SECRET_KEY', 'maslovkit-local-only-key')

DEBUG = os.getenv('DEBUG', 'False').lower() == 'true'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    # Third party
    'rest_framework',

    # Local apps
    'apps.Orbits',
]

# Everything is computed in memory; no database is configured.
DATABASES = {}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Analysis defaults. Environment overrides are resolved at call time by
# apps.Orbits.conf.Config.
MASLOVKIT = {
    'TRUNCATION': 400,
    'I1_MIN': -4,
    'I1_MAX': 40,
    'Q_MAX': 12,
    'M_MAX': 10,
    'FORMAT': 'text',
    'MIN_GUARD': 4,
    'WORKERS': 1,
}

# Logging Configuration
LOG_DIR = Path(os.getenv('MASLOVKIT_LOG_DIR', BASE_DIR.parent / 'logs'))
LOG_DIR.mkdir(parents=True, exist_ok=True)

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {process:d} {thread:d} {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'file': {
            'level': 'DEBUG',
            'class': 'logging.FileHandler',
            'filename': LOG_DIR / 'maslovkit.log',
            'formatter': 'verbose',
            'encoding': 'utf-8',
        },
        'console': {
            'level': os.getenv('LOG_LEVEL', 'WARNING').upper(),
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },
    'loggers': {
        'django': {
            'handlers': ['console'],
            'level': 'WARNING',
            'propagate': False,
        },
        'apps.Orbits': {
            'handlers': ['console', 'file'],
            'level': 'DEBUG',
            'propagate': False,
        },
    },
}
