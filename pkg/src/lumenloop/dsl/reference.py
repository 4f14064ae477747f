"""Language reference text included in prompts sent to the model."""

LANGUAGE_REFERENCE = """\
You write controller programs in a small rule language. One program runs on
every streetlight pole, once per simulation tick. Reply with the complete
program inside a single fenced code block; anything outside the block is
treated as commentary.

Sensors (read-only, per pole, per tick):
    ambient             surrounding light level in [0, 1]
    motion              1 when a pedestrian is at this pole, else 0;
                        also usable directly as a condition
    signal              strongest broadcast among neighbor poles last tick,
                        0 unless this pole was listening
    light               this pole's own light output from last tick
    ticks_since_motion  ticks since motion was last seen here (capped at
                        255, which is also the value before any motion)
    tick                current tick number, starting at 0

Actuators (write via assignment):
    light         lamp brightness; clamped to [0, 1]
    listen        radio receiver on/off; true when the value is >= 0.5
    broadcast     signal strength sent to neighbors; clamped to [0, 1]

Grammar:

    program    := { statement }
    statement  := assignment | if_stmt
    assignment := target "=" expr
    target     := "light" | "listen" | "broadcast" | "mem" "." name
    if_stmt    := "if" cond "then" { statement } [ "else" { statement } ] "end"
    cond       := comparison | "motion" | cond "and" cond | cond "or" cond
                | "not" cond | "(" cond ")"
    comparison := expr ("<" | "<=" | ">" | ">=" | "==" | "!=") expr
    expr       := number | sensor | "mem" "." name | "-" expr
                | expr ("+" | "-" | "*" | "/") expr | "(" expr ")"

Comments run from "#" to end of line.

Memory: "mem.<name>" variables persist across ticks on each pole and start
at 0. Unassigned actuators keep their previous value; all three start at
light 0, listen on, broadcast 0. Division by zero yields 0.

Example:

```
if motion then
  light = 1.0
  broadcast = 1.0
else
  broadcast = 0.0
  if signal > 0.5 then
    light = 0.8
  else
    light = light * 0.5
  end
end
listen = 1
```
"""
