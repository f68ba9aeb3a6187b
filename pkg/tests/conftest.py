from hypothesis import settings

# property bodies run exhaustive inner loops, so per-example timing is noisy
settings.register_profile("default", deadline=None, max_examples=80)
settings.load_profile("default")
