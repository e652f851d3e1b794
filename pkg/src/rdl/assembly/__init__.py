"""Prefix-scale constructions of dense monochromatic paths."""
from rdl.assembly.common import Assembly, AssemblyTrace, check_trace, recheck_trace
from rdl.assembly.connectors import (ConnectorWitness, DegradedConnector, bridge_dual, bridge_no_matching,
                                     connector_path, find_alpha_connector, two_matching)
from rdl.assembly.strong import assemble_23_sud_path
from rdl.assembly.upper import assemble_34_path

__all__ = [
    "Assembly", "AssemblyTrace", "ConnectorWitness", "DegradedConnector", "assemble_23_sud_path",
    "assemble_34_path", "bridge_dual", "bridge_no_matching", "check_trace", "connector_path",
    "find_alpha_connector", "recheck_trace", "two_matching",
]
