import os

from hypothesis import settings as hypothesis_settings

import isolde


isolde.initialize()
hypothesis_settings.register_profile("isolde", derandomize=True, deadline=None, max_examples=40)
hypothesis_settings.register_profile("thorough", derandomize=True, deadline=None, max_examples=500)
hypothesis_settings.load_profile(os.environ.get("ISOLDE_HYPOTHESIS_PROFILE", "isolde"))
