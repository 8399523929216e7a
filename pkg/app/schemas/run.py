import json
from typing import Any, Dict

from pydantic import BaseModel, Field


class RunConfig(BaseModel):
    """Fully resolved configuration of one CLI run, defaults included"""

    command: str
    options: Dict[str, Any] = Field(default_factory=dict)
    version: str

    def header_line(self) -> str:
        """Single '#'-prefixed JSON comment line for CSV outputs."""
        return "# " + json.dumps(self.model_dump(mode="json"), sort_keys=True)
