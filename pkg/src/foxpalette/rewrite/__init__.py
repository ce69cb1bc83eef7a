from .moves import Move, MoveError, apply_move, candidate_moves, r1_add, r1_remove, r2_pull, r2_push, r3_slide
from .state import ColoredDiagram, InvalidColoring
