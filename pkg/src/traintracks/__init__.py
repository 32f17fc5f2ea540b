"""Train track maps on graphs of spaces: turns, INPs, legalization, fixed subgroups."""
