from market_lab.models.circuit import NorCircuit
from market_lab.services.netlist import emit_netlist, parse_netlist

from .files.generic_dao import GenericFileDAO


class NetlistDAO(GenericFileDAO[NorCircuit]):
    """Data access object for NOR netlist text files."""

    format_name = "netlist"

    def dumps(self, model: NorCircuit) -> str:
        return emit_netlist(model)

    def loads(self, text: str) -> NorCircuit:
        return parse_netlist(text)
