from market_lab.models.market import MarketModel

from .files.generic_dao import GenericFileDAO
from .models.files import MarketSpecFile


class MarketSpecDAO(GenericFileDAO[MarketModel]):
    """Data access object for market.json files."""

    format_name = "market spec"

    def dumps(self, model: MarketModel) -> str:
        spec = MarketSpecFile.from_market(model)
        return spec.model_dump_json(indent=2, exclude_none=True) + "\n"

    def loads(self, text: str) -> MarketModel:
        return MarketSpecFile.model_validate_json(text).to_market()
