import environ
import os


root = environ.Path(__file__) - 1
env = environ.Env()
environ.Env.read_env(env_file=root(".env"))

BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

SECRET_KEY = env.str("SECRET_KEY", default="nested-cones-test-project")
DEBUG = env.bool("DEBUG", default=False)
DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

INSTALLED_APPS = [
    "rest_framework",
    "nestedcones",
]

DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": "db.sqlite3",
    }
}

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = True

USE_TZ = True

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "handlers": {"console": {"class": "logging.StreamHandler"}},
    "root": {
        "handlers": ["console"],
        "level": env.str("PNC_LOG_LEVEL", default="WARNING"),
    },
}

PNC_SETTINGS = {
    "WORKERS": env.int("PNC_THREADS", default=1),
    "OPTIMIZER": {
        "MAX_ITERS": 400,
        "RESTARTS": 1,
    },
    "BOOTSTRAP": {
        "REPLICATES": 50,
    },
}
