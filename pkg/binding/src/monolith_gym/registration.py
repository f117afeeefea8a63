"""Optional hookup into the real gym registry when gym is installed.

The package works without gym; this only exists so `gym.make(name)` resolves
to our environments in installations that have gym anyway.
"""

from __future__ import annotations

from monolith_gym.envs import REGISTRY


def register_with_gym() -> bool:
    """Register every environment name with gym, if importable.

    Returns True when registration happened, False when gym is absent.
    Safe to call more than once.
    """
    try:
        import gym
        from gym.envs.registration import register, registry
    except ImportError:
        return False
    for name in REGISTRY:
        try:
            exists = name in registry
        except TypeError:  # older registries are dict-like with .env_specs
            exists = name in getattr(registry, "env_specs", {})
        if not exists:
            register(id=name, entry_point="monolith_gym.registration:make_for_gym_registry",
                     kwargs={"name": name})
    return True


def make_for_gym_registry(name: str, **kwargs):
    from monolith_gym.envs import make

    return make(name, **kwargs)
