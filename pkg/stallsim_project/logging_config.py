import os
import sys

# The test runner keeps logs on the console only
TESTING = len(sys.argv) > 1 and sys.argv[1] == 'test'

CONSOLE_LOG_LEVEL = os.getenv('STALLSIM_CONSOLE_LOG_LEVEL', 'WARNING').upper()
JSON_LOGS_ENABLED = os.getenv('STALLSIM_JSON_LOGS', 'True').lower() in ('true', '1', 't') and not TESTING

# stdout belongs to command output; every log line goes to stderr or the daily JSON file
_stall_handlers = ['console', 'json_daily'] if JSON_LOGS_ENABLED else ['console']

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '%(asctime)s [%(levelname)s] %(name)s: %(message)s'
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'verbose',
            'level': CONSOLE_LOG_LEVEL,
        },
        # Append records into daily JSON array at logs/YYYY-MM-DD.json
        'json_daily': {
            'class': 'stall_analysis.utils.production_logger.JsonDailyArrayHandler',
            'level': 'INFO',
        },
    },
    'loggers': {
        'stall_analysis': {
            'handlers': _stall_handlers,
            'level': 'INFO',
            'propagate': False,
        },
        'django': {
            'handlers': ['console'],
            'level': 'WARNING',
        },
    },
}
