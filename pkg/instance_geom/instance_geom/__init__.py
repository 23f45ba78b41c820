from .points import PointSequence, BoxD, SimplexD
from .meter import CostMeter, PointAccess
from .maxima import maxima2d
from .hull2d import hull2d
from .hull3d import hull3d
from .entropy import entropy_report
from .adversary import adversary_session
from .reporting import report_adaptive, count_adaptive, encode_relation
