import configparser
import os
from typing import Dict, Any

from dotenv import load_dotenv

from .errors import BadSpec

# .env values only fill variables that are not already set in the environment
load_dotenv()

PHI_CAP_ENV = "ETSCHED_PHI_CAP"
LOG_LEVEL_ENV = "ETSCHED_LOG_LEVEL"


class Config:
    def __init__(self, config_file: str = "config.ini"):
        self.config_file = config_file
        self.config = configparser.ConfigParser()
        self.load_config()

    def load_config(self):
        """Load configuration from file"""
        if os.path.exists(self.config_file):
            self.config.read(self.config_file)
        else:
            # Create default config if file doesn't exist
            self._create_default_config()

    def use_file(self, config_file: str):
        """Switch to another configuration file, e.g. from --config"""
        self.config_file = config_file
        self.config = configparser.ConfigParser()
        self.load_config()

    def _create_default_config(self):
        """Create default configuration"""
        self.config['SERVER'] = {
            'host': '0.0.0.0',
            'port': '8000',
            'reload': 'false'
        }

        self.config['LOGGING'] = {
            'log_level': 'INFO',
            'log_to_file': 'false',
            'log_file': 'logs/etsched.log',
            'max_log_size_mb': '10',
            'backup_count': '5'
        }

        self.config['MODEL'] = {
            'default_alpha': '3'
        }

        self.config['LIMITS'] = {
            'phi_cap': '2000000',
            'oracle_preemptive_max_jobs': '12',
            'oracle_nonpreemptive_max_jobs': '6',
            'knapsack_max_items': '20'
        }

        self.config['GENERATOR'] = {
            'n': '4',
            'max_time': '6',
            'max_work': '3',
            'max_weight': '1',
            'equal_work': 'false',
            'budget': '1',
            'seed': '0'
        }

        # Save default config
        try:
            with open(self.config_file, 'w') as f:
                self.config.write(f)
        except OSError:
            # read-only working directory: keep the in-memory defaults
            pass

    def get(self, section: str, key: str, fallback: str = None) -> str:
        """Get configuration value"""
        return self.config.get(section, key, fallback=fallback)

    def getboolean(self, section: str, key: str, fallback: bool = False) -> bool:
        """Get boolean configuration value"""
        return self.config.getboolean(section, key, fallback=fallback)

    def getint(self, section: str, key: str, fallback: int = 0) -> int:
        """Get integer configuration value"""
        return self.config.getint(section, key, fallback=fallback)

    def default_alpha(self) -> int:
        return self.getint('MODEL', 'default_alpha', 3)

    def phi_cap(self) -> int:
        """Cap on |Φ|; the ETSCHED_PHI_CAP environment variable wins over the file"""
        override = os.environ.get(PHI_CAP_ENV)
        if override:
            try:
                return int(override)
            except ValueError:
                raise BadSpec(f"{PHI_CAP_ENV} must be an integer, got {override!r}")
        return self.getint('LIMITS', 'phi_cap', 2000000)

    def get_limits(self) -> Dict[str, int]:
        """Get solver and oracle size limits"""
        return {
            'phi_cap': self.phi_cap(),
            'oracle_preemptive_max_jobs': self.getint('LIMITS', 'oracle_preemptive_max_jobs', 12),
            'oracle_nonpreemptive_max_jobs': self.getint('LIMITS', 'oracle_nonpreemptive_max_jobs', 6),
            'knapsack_max_items': self.getint('LIMITS', 'knapsack_max_items', 20)
        }

    def get_logging_config(self) -> Dict[str, Any]:
        """Get logging configuration"""
        return {
            'log_level': os.environ.get(LOG_LEVEL_ENV) or self.get('LOGGING', 'log_level', 'INFO'),
            'log_to_file': self.getboolean('LOGGING', 'log_to_file', False),
            'log_file': self.get('LOGGING', 'log_file', 'logs/etsched.log'),
            'max_log_size_mb': self.getint('LOGGING', 'max_log_size_mb', 10),
            'backup_count': self.getint('LOGGING', 'backup_count', 5)
        }

    def get_generator_defaults(self) -> Dict[str, Any]:
        """Get defaults for the instance generator"""
        return {
            'n': self.getint('GENERATOR', 'n', 4),
            'max_time': self.getint('GENERATOR', 'max_time', 6),
            'max_work': self.getint('GENERATOR', 'max_work', 3),
            'max_weight': self.getint('GENERATOR', 'max_weight', 1),
            'equal_work': self.getboolean('GENERATOR', 'equal_work', False),
            'budget': self.get('GENERATOR', 'budget', '1'),
            'seed': self.getint('GENERATOR', 'seed', 0)
        }

    def get_server_config(self) -> Dict[str, Any]:
        """Get server configuration"""
        return {
            'host': self.get('SERVER', 'host', '0.0.0.0'),
            'port': self.getint('SERVER', 'port', 8000),
            'reload': self.getboolean('SERVER', 'reload', False)
        }


# Global config instance
config = Config()
