"""Compiled-market directories: market.json, prices.csv, varmap.json and the source netlists."""

from pathlib import Path

from market_lab.models.circuit import CompiledMarket, NorCircuit
from market_lab.utils.logging import get_market_lab_logger

from .files.generic_dao import GenericFileDAO
from .market_dao import MarketSpecDAO
from .models.files import VariableMapFile
from .netlist_dao import NetlistDAO
from .price_dao import PriceCsvDAO

logger = get_market_lab_logger("dao.compiled")

MARKET_FILE = "market.json"
PRICES_FILE = "prices.csv"
VARMAP_FILE = "varmap.json"
OUT_NETLIST_FILE = "out.net"
COND_NETLIST_FILE = "cond.net"


class VariableMapDAO(GenericFileDAO[VariableMapFile]):
    format_name = "variable map"

    def dumps(self, model: VariableMapFile) -> str:
        return model.model_dump_json(indent=2, exclude_none=True) + "\n"

    def loads(self, text: str) -> VariableMapFile:
        return VariableMapFile.model_validate_json(text)


class CompiledMarketDAO:
    """
    Stores a compiled market together with the circuits it was compiled from.

    The netlists travel with the market so that ``verify`` can rerun every check from the
    directory alone.
    """

    def __init__(self) -> None:
        self.markets = MarketSpecDAO()
        self.prices = PriceCsvDAO()
        self.varmaps = VariableMapDAO()
        self.netlists = NetlistDAO()

    def save(
        self, cm: CompiledMarket, c_out: NorCircuit, c_cond: NorCircuit | None, directory: str | Path
    ) -> Path:
        target = Path(directory)
        self.markets.save(cm.market, target / MARKET_FILE)
        self.prices.save(cm.history, target / PRICES_FILE)
        self.varmaps.save(VariableMapFile.from_compiled(cm), target / VARMAP_FILE)
        self.netlists.save(c_out, target / OUT_NETLIST_FILE)

        cond_path = target / COND_NETLIST_FILE
        if c_cond is not None:
            self.netlists.save(c_cond, cond_path)
        elif cond_path.exists():
            cond_path.unlink()

        logger.info(f"Saved compiled {cm.rule} market to {target}")
        return target

    def load(self, directory: str | Path) -> tuple[CompiledMarket, NorCircuit, NorCircuit | None]:
        """
        Read a compiled-market directory.

        Raises:
            FileNotFoundError: If the directory or one of its required files is missing
            ValueError: If a file is invalid or the files disagree
        """
        source = Path(directory)
        if not source.is_dir():
            raise FileNotFoundError(f"compiled market directory not found: {directory}")

        market = self.markets.load(source / MARKET_FILE)
        history = self.prices.load(source / PRICES_FILE)
        varmap = self.varmaps.load(source / VARMAP_FILE)
        c_out = self.netlists.load(source / OUT_NETLIST_FILE)

        cond_path = source / COND_NETLIST_FILE
        c_cond = self.netlists.load(cond_path) if cond_path.exists() else None
        if varmap.conditioned != (c_cond is not None):
            raise ValueError(
                f"{VARMAP_FILE} says conditioned={varmap.conditioned} but {COND_NETLIST_FILE} "
                f"is {'present' if c_cond is not None else 'missing'}"
            )

        return varmap.to_compiled(market, history), c_out, c_cond
