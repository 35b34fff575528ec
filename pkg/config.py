# config.py
import os
import yaml
import logging
from pydantic import BaseModel, Field, ValidationError
from dotenv import load_dotenv
from typing import Optional

from core.errors import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = "config.yaml"


class EngineConfig(BaseModel):
    enumeration_cap: int = Field(default=26, ge=0)      # наибольшее n для перебора знаков
    general_cap: int = Field(default=20_000_000, ge=1)  # предел Π|носителей|
    workers: int = Field(default=1, ge=0)               # 0 - число физических ядер
    partition_bits: int = Field(default=4, ge=0)


class RankConfig(BaseModel):
    exact_search_budget: int = Field(default=200_000, ge=1)
    m_search_budget: int = Field(default=200_000, ge=1)


class StructureConfig(BaseModel):
    fixing_cap: int = Field(default=14, ge=0)
    box_cap: int = Field(default=2_000_000, ge=1)
    cover_cap: int = Field(default=40, ge=0)


class ExperimentsConfig(BaseModel):
    edgestats_cap: int = Field(default=100_000_000, ge=1)
    seed: int = 0
    decoupling_cap: int = Field(default=24, ge=0)


class BoundsConfig(BaseModel):
    precision_bits: int = Field(default=160, ge=128)


class LoggingConfig(BaseModel):
    level: str = "INFO"


class Config(BaseModel):
    engine: EngineConfig = Field(default_factory=EngineConfig)
    rank: RankConfig = Field(default_factory=RankConfig)
    structure: StructureConfig = Field(default_factory=StructureConfig)
    experiments: ExperimentsConfig = Field(default_factory=ExperimentsConfig)
    bounds: BoundsConfig = Field(default_factory=BoundsConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)


# переменная окружения → (секция, ключ)
ENV_OVERRIDES = {
    "QLO_WORKERS": ("engine", "workers"),
    "QLO_ENUM_CAP": ("engine", "enumeration_cap"),
    "QLO_LOG_LEVEL": ("logging", "level"),
}


def default_config_path() -> str:
    """Путь из QLO_CONFIG (в том числе из .env) или config.yaml"""
    load_dotenv()
    return os.getenv("QLO_CONFIG", DEFAULT_CONFIG_PATH)


class ConfigLoader:
    def __init__(self, config_path: Optional[str] = None):
        self.config_path = config_path or default_config_path()
        self._last_modified = 0
        self._cached_config = None

    def has_changed(self):
        """Проверяет, изменился ли файл конфига"""
        try:
            current_modified = os.path.getmtime(self.config_path)
            if current_modified > self._last_modified:
                return True
        except OSError:
            pass
        return False

    def load_if_changed(self):
        """Перезагружает конфиг только если он изменился"""
        if self._cached_config is None or self.has_changed():
            logger.info(f"Обнаружены изменения в {self.config_path}, перезагружаем конфигурацию...")
            return self.load()
        return self._cached_config

    def _read_file(self) -> dict:
        if not os.path.exists(self.config_path):
            logger.info(f"Файл {self.config_path} не найден, используются значения по умолчанию.")
            return {}
        try:
            with open(self.config_path, "r", encoding="utf-8") as file:
                data = yaml.safe_load(file) or {}
        except yaml.YAMLError as e:
            logger.error(f"Ошибка разбора YAML: {e}")
            raise ConfigError(f"Некорректный YAML в {self.config_path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"Корень {self.config_path} должен быть словарём")
        self._last_modified = os.path.getmtime(self.config_path)
        return data

    def load(self) -> Config:
        """
        Читает YAML и накладывает переменные окружения.

        :return: проверенный Config
        :raises ConfigError: при ошибке разбора или валидации
        """
        load_dotenv()
        config_data = self._read_file()

        for variable, (section, key) in ENV_OVERRIDES.items():
            value = os.getenv(variable)
            if value:
                config_data.setdefault(section, {})
                if not isinstance(config_data[section], dict):
                    raise ConfigError(f"Секция {section} должна быть словарём")
                config_data[section][key] = value
                logger.debug(f"{variable} переопределяет {section}.{key}")

        try:
            config = Config(**config_data)
        except ValidationError as e:
            logger.error(f"Ошибка валидации: {e}")
            raise ConfigError(f"Конфигурация {self.config_path} не прошла проверку: {e}") from e

        self._cached_config = config
        logger.info("Конфигурация загружена успешно.")
        return config
