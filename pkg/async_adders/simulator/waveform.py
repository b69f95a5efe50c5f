from typing import Dict, List, Sequence, Tuple

from jinja2 import Environment

from async_adders.models.netlist import Netlist
from async_adders.simulator.engine import TransactionLog

jinja_env = Environment(trim_blocks=True, lstrip_blocks=True, keep_trailing_newline=True)

VCD_TEMPLATE = """$version async_adders $end
$timescale 1{{ time_unit }} $end
$scope module {{ module }} $end
{% for net in nets %}
$var wire 1 {{ net.code }} {{ net.name }} $end
{% endfor %}
$upscope $end
$enddefinitions $end
#0
$dumpvars
{% for net in nets %}
0{{ net.code }}
{% endfor %}
$end
{% for time, changes in steps %}
#{{ time }}
{% for level, code in changes %}
{{ level }}{{ code }}
{% endfor %}
{% endfor %}
"""


def vcd_code(index: int) -> str:
    """Short identifier from the printable range '!'..'~'"""
    chars = []
    index += 1
    while index:
        index, digit = divmod(index - 1, 94)
        chars.append(chr(33 + digit))
    return "".join(reversed(chars))


def render_vcd(logs: Sequence[TransactionLog], netlist: Netlist, time_unit: str = "ps") -> str:
    """Value change dump of recorded transitions, every net declared"""
    codes = {name: vcd_code(i) for i, name in enumerate(netlist.nets)}
    changes: Dict[int, List[Tuple[int, str]]] = {}
    for log in logs:
        for net, transitions in log.transitions.items():
            for time, level in transitions:
                changes.setdefault(time, []).append((level, codes[net]))
    template = jinja_env.from_string(VCD_TEMPLATE)
    return template.render(
        time_unit=time_unit,
        module=netlist.name.replace(" ", "_"),
        nets=[{"name": name, "code": code} for name, code in codes.items()],
        steps=sorted(changes.items()),
    )
