"""Boid-flock plausibilization of tracked highway objects.

One boid flock follows each tracked vehicle; flocks repel each other
laterally and boid motion is filtered through a Dubins reachability check.
The average lateral distance between flocks stabilizes the estimated
separation between hard-to-discriminate vehicles.
"""

__version__ = "0.1.0"
