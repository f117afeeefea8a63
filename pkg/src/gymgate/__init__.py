"""Remote-operated monolith-navigation RL environments.

Four simulated arena variants (empty/obstacles x discrete/continuous control)
served over a length-prefixed TCP protocol by a gateway that enforces
exclusive leases, time bookings, experiment logs and a leaderboard.
"""

__version__ = "0.1.0"
