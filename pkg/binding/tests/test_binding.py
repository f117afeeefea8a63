import subprocess
import sys

import numpy as np
import pytest

import monolith_gym
from monolith_gym import Box, Channels, Discrete, UsageError, make
from monolith_gym.envs import REGISTRY, convert_observation, observation_space

from gymgate.worldsim import ChannelType, Observation, World, default_config
from gymgate.gateway.service import default_env_seed

SIM_NAMES = [name for name in REGISTRY if name.endswith("Sim-v0")]


def test_registry_names_and_aliases():
    assert len(REGISTRY) == 8
    assert len(SIM_NAMES) == 4
    for name, spec in REGISTRY.items():
        assert name.startswith("OffWorldMonolith")
        assert spec.gateway_name == name[len("OffWorld"):]
        assert spec.paced == name.endswith("Real-v0")


def test_unknown_name_and_missing_token_fail_locally():
    with pytest.raises(UsageError):
        make("OffWorldMonolithDiscreteSym-v0")
    with pytest.raises(UsageError):
        make("OffWorldMonolithDiscreteSim-v0", channel_type="depth")


@pytest.mark.parametrize("name", SIM_NAMES)
def test_all_sim_names_construct_and_reset(gateway, name):
    with make(name, experiment_name=f"construct-{name}") as env:
        observation = env.reset()
        assert observation.shape == (240, 320, 1)
        assert observation.dtype == np.float32
        assert env.observation_space.contains(observation)


@pytest.mark.parametrize("channels,count", [
    (Channels.DEPTH_ONLY, 1), (Channels.RGB_ONLY, 3), (Channels.RGBD, 4),
])
def test_observation_shape_per_channel(gateway, channels, count):
    with make("OffWorldMonolithDiscreteSim-v0", experiment_name=f"chan-{count}",
              channel_type=channels) as env:
        observation = env.reset()
        assert observation.shape == (240, 320, count)
        assert env.observation_space.contains(observation)


def test_step_contract_and_reward_values(gateway):
    with make("OffWorldMonolithDiscreteSim-v0", experiment_name="contract") as env:
        env.reset()
        for _ in range(5):
            observation, reward, done, info = env.step(env.action_space.sample())
            assert env.observation_space.contains(observation)
            assert reward in (0.0, 1.0)
            assert isinstance(done, bool)
            assert info["termination"] in ("none", "success", "step_limit", "boundary")
            assert done == (info["termination"] != "none")
            if done:
                env.reset()


def test_invalid_action_rejected_before_wire_traffic(gateway):
    with make("OffWorldMonolithDiscreteSim-v0", experiment_name="invalid-action") as env:
        env.reset()
        _, _, _, info = env.step(0)
        step_index = info["step_index"]
        for bad in (5, -1, 1.5, True, None):
            with pytest.raises(UsageError):
                env.step(bad)
        # the remote step counter must not have moved
        _, _, _, info = env.step(1)
        assert info["step_index"] == step_index + 1


def test_continuous_action_space_bounds(gateway):
    with make("OffWorldMonolithContinuousSim-v0", experiment_name="cont") as env:
        space = env.action_space
        assert isinstance(space, Box)
        assert space.shape == (2,)
        env.reset()
        env.step(np.array([0.5, -1.0], dtype=np.float32))  # exact bounds are legal
        with pytest.raises(UsageError):
            env.step(np.array([0.6, 0.0], dtype=np.float32))
        with pytest.raises(UsageError):
            env.step(np.array([0.0, 1.01], dtype=np.float32))


def test_depth_values_match_simulator_within_quantization(gateway):
    # the env world is fresh, so its first reset must equal a seed-matched
    # local render; binding depth = wire millimeters / 1000
    name = "OffWorldMonolithObstaclesDiscreteSim-v0"
    with make(name, experiment_name="depth-parity", channel_type=Channels.RGBD) as env:
        observation = env.reset()
    spec = REGISTRY[name]
    mirror = World(default_config(spec.variant), seed=default_env_seed(spec.gateway_name))
    mirror.channel_config = ChannelType.RGBD
    expected = mirror.reset()
    np.testing.assert_array_equal(observation[..., :3], expected.rgb.astype(np.float32))
    np.testing.assert_allclose(observation[..., 3] * 1000.0,
                               expected.depth.astype(np.float32), atol=0.5)


def test_convert_observation_depth_scaling():
    depth = np.full((240, 320), 1234, dtype=np.uint16)
    depth[0, 0] = 0xFFFF  # no-hit sentinel maps to the space ceiling
    obs = Observation(channel_config=ChannelType.DEPTH_ONLY, depth=depth)
    planes = convert_observation(obs, Channels.DEPTH_ONLY)
    assert planes[1, 1, 0] == pytest.approx(1.234)
    assert planes[0, 0, 0] == pytest.approx(65.535)
    assert observation_space(Channels.DEPTH_ONLY).contains(planes)


def test_spaces_api_conformance():
    discrete = Discrete(4)
    discrete.seed(3)
    for _ in range(20):
        assert discrete.contains(discrete.sample())
    assert not discrete.contains(4)
    assert not discrete.contains(True)
    box = Box(low=np.array([-0.5, -1.0]), high=np.array([0.5, 1.0]))
    box.seed(3)
    for _ in range(20):
        assert box.contains(box.sample())
    assert not box.contains(np.array([0.0, 2.0]))
    assert not box.contains(np.array([np.nan, 0.0]))
    assert not box.contains(np.array([0.0]))


def test_canonical_example_script_runs_unmodified(gateway, tmp_path):
    # the README usage snippet, verbatim, as a standalone process
    script = """
import monolith_gym as gym
from monolith_gym.channels import Channels

env = gym.make('OffWorldMonolithDiscreteSim-v0',
               experiment_name='My new experiment',
               resume_experiment=False,
               channel_type=Channels.DEPTH_ONLY)

observation = env.reset()
for _ in range(10):
    observation, reward, done, info = env.step(env.action_space.sample())
    if done:
        observation = env.reset()
env.close()
print('script ok', observation.shape)
"""
    result = subprocess.run([sys.executable, "-c", script], capture_output=True,
                            text=True, timeout=120)
    assert result.returncode == 0, result.stderr
    assert "script ok (240, 320, 1)" in result.stdout


def test_register_with_gym_absent_is_noop():
    # gym is not installed here; registration must decline gracefully
    assert monolith_gym.register_with_gym() is False
