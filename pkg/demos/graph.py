"""Write the reachable-term graph of a machine's rewrite system as DOT."""

import sys

from diamondtrs import Budget, compile_trs
from diamondtrs.corpus import load
from diamondtrs.encode import INIT_T
from diamondtrs.formats import export_graph

name = sys.argv[1] if len(sys.argv) > 1 else "halt1"
sys.stdout.write(export_graph(compile_trs(load(name)), INIT_T, Budget(50, 200)))
