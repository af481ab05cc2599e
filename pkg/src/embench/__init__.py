"""Synthetic EM signal workbench: labeled IQ generation, instruction corpus
and QA benchmark construction, two-stage distillation training, and text
metric evaluation."""

__version__ = "0.1.0"
