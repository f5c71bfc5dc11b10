import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "oracles"))

from hypothesis import settings

settings.register_profile("ci", derandomize=True, max_examples=60, deadline=None)
settings.load_profile("ci")
