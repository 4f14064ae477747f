"""Built-in rule programs.

Two fixed baselines plus the three hand-transcribed refinement stages that
the prompt-driven loop historically produced. The refinement programs are
kept as source text so transcripts, docs, and tests all agree on one
canonical form.
"""

from __future__ import annotations

from functools import lru_cache

from ..errors import UnknownBaseline
from .nodes import Program
from .parser import parse_source

ALWAYS_ON_SOURCE = """\
light = 1.0
listen = 1
broadcast = 0
"""

ALWAYS_OFF_SOURCE = """\
light = 0
listen = 0
broadcast = 0
"""

# Stage 1: listen permanently, flood light on any activity, fall back to a
# dim standby level once a pole has been idle for a while.
ITERATION_1_SOURCE = """\
listen = 1
if motion or signal > 0.5 then
  light = 1.0
  broadcast = 1.0
else
  broadcast = 0.0
  if ticks_since_motion > 8 then
    light = 0.2
  end
end
"""

# Stage 2: light ahead of pedestrians using neighbor signals, and keep a
# low floor level only when the surroundings are nearly pitch dark.
ITERATION_2_SOURCE = """\
listen = 1
if motion then
  light = 1.0
  broadcast = 1.0
else
  broadcast = 0.0
  if signal > 0.5 then
    light = 0.8
  else
    if ambient < 0.05 then
      light = 0.3
    else
      light = 0.0
    end
  end
end
"""

# Stage 3: broadcast only on the first tick motion appears, decide whether
# to listen from the present light level, and decay the light smoothly
# instead of snapping off.
ITERATION_3_SOURCE = """\
if motion and mem.was_moving < 0.5 then
  broadcast = 1.0
else
  broadcast = 0.0
end
if motion then
  mem.was_moving = 1.0
  light = 1.0
else
  mem.was_moving = 0.0
  if signal > 0.5 then
    light = 0.8
  else
    light = light * 0.5
  end
end
if light < 0.5 then
  listen = 1
else
  listen = 0
end
"""

BUILTIN_PROGRAM_SOURCES: dict[str, str] = {
    "always_on": ALWAYS_ON_SOURCE,
    "always_off": ALWAYS_OFF_SOURCE,
    "iteration1": ITERATION_1_SOURCE,
    "iteration2": ITERATION_2_SOURCE,
    "iteration3": ITERATION_3_SOURCE,
}


@lru_cache(maxsize=None)
def builtin_program(name: str) -> Program:
    try:
        source = BUILTIN_PROGRAM_SOURCES[name]
    except KeyError:
        known = ", ".join(sorted(BUILTIN_PROGRAM_SOURCES))
        raise UnknownBaseline(f"unknown builtin {name!r} (known: {known})") from None
    return parse_source(source)
