"""Valve-rotation RL benchmark: surrogate gripper environment, from-scratch
actor-critic agents, an experiment harness, and a servo-bus emulation layer.
"""

__version__ = "0.1.0"
