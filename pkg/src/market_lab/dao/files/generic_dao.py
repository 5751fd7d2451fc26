from abc import ABC, abstractmethod
from pathlib import Path
from typing import Generic, TypeVar

from pydantic import BaseModel

from ...utils.logging import get_market_lab_logger

# Domain model a DAO reads and writes
ModelType = TypeVar("ModelType", bound=BaseModel)

logger = get_market_lab_logger("dao.generic")


class GenericFileDAO(Generic[ModelType], ABC):
    """A generic Data Access Object for one domain model stored as a text file."""

    format_name = "file"

    @abstractmethod
    def dumps(self, model: ModelType) -> str:
        """Render a model as file text. Must be implemented by subclasses."""
        pass

    @abstractmethod
    def loads(self, text: str) -> ModelType:
        """Parse file text into a model. Must be implemented by subclasses."""
        pass

    def save(self, model: ModelType, path: str | Path) -> Path:
        """Write a model to ``path``, creating parent directories."""
        target = Path(path)
        model_name = type(model).__name__
        logger.debug(f"Writing {model_name} as {self.format_name} to {target}")

        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(self.dumps(model), encoding="utf-8")
        except OSError as e:
            logger.error(f"Failed to write {self.format_name} {target}: {e}")
            raise

        logger.info(f"Wrote {self.format_name} {target}")
        return target

    def load(self, path: str | Path) -> ModelType:
        """
        Read a model from ``path``.

        Raises:
            FileNotFoundError: If the file does not exist
            ValueError: If the content is not a valid file of this format
        """
        source = Path(path)
        if not source.exists():
            raise FileNotFoundError(f"{self.format_name} not found: {path}")

        logger.debug(f"Reading {self.format_name} from {source}")
        try:
            return self.loads(source.read_text(encoding="utf-8"))
        except ValueError as e:
            raise ValueError(f"Invalid {self.format_name} in {path}: {e}") from e
