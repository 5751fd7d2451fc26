from pathlib import Path

from market_lab.models.system import DayProvenance, LinearSystem

from .files.generic_dao import GenericFileDAO
from .models.files import SystemFile


class SystemDAO(GenericFileDAO[SystemFile]):
    """Data access object for system.json files."""

    format_name = "linear system"

    def dumps(self, model: SystemFile) -> str:
        return model.model_dump_json(indent=2) + "\n"

    def loads(self, text: str) -> SystemFile:
        return SystemFile.model_validate_json(text)

    def save_system(self, system: LinearSystem, provenance: DayProvenance, path: str | Path) -> Path:
        return self.save(SystemFile.from_system(system, provenance), path)
