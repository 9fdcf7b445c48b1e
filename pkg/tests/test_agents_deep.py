import numpy as np
import pytest

from duopoly_lab.agents.base import Observation
from duopoly_lab.agents.ddpg import DdpgAgent
from duopoly_lab.agents.ddqn import DdqnAgent, ddqn_target
from duopoly_lab.markets import GRID_SIZE, build_price_grid

GRID = build_price_grid(1.473, 1.925)


class _StubNet:
    """Stand-in with a fixed Q row, for exercising the target formula."""

    def __init__(self, row):
        self.row = np.asarray(row, dtype=float)

    def forward(self, x, train=False):
        return np.tile(self.row, (len(x), 1))


class TestDdqnTarget:
    def test_zero_target_net_gives_reward(self):
        online = _StubNet(np.arange(5.0))
        target = _StubNet(np.zeros(5))
        y = ddqn_target(np.array([0.7]), np.zeros((1, 2)), online, target, 0.99)
        assert y[0] == pytest.approx(0.7, abs=1e-12)

    def test_online_equal_target_matches_max_target(self):
        row = np.array([0.3, 1.4, -0.2, 0.9])
        net = _StubNet(row)
        y = ddqn_target(np.array([1.0]), np.zeros((1, 2)), net, net, 0.99)
        assert y[0] == pytest.approx(1.0 + 0.99 * row.max(), abs=1e-12)

    def test_decoupled_selection_and_evaluation(self):
        # online argmax picks index 3; target values it at 2.0
        online = _StubNet([0.0, 0.1, 0.2, 5.0, 0.3])
        target = _StubNet([9.0, 9.0, 9.0, 2.0, 9.0])
        y = ddqn_target(np.array([1.0]), np.zeros((1, 2)), online, target, 0.99)
        assert y[0] == pytest.approx(2.98, abs=1e-12)


class TestDdqnAgent:
    def test_acts_on_grid(self):
        agent = DdqnAgent(GRID, np.random.default_rng(0))
        p = agent.act(Observation(1.5, 1.6, 0))
        assert p in GRID.points

    def test_warmup_gate_stores_but_does_not_learn(self):
        agent = DdqnAgent(GRID, np.random.default_rng(0))
        before = [w.copy() for w in agent.online.params()]
        obs = Observation(1.5, 1.6, 0)
        nxt = Observation(1.55, 1.6, 1)
        for _ in range(agent.batch_size - 1):
            agent.observe(obs, 1.55, 0.2, nxt)
        assert len(agent.buffer) == agent.batch_size - 1
        assert all(np.array_equal(a, b)
                   for a, b in zip(before, agent.online.params()))

    def test_learning_starts_at_one_full_batch(self):
        agent = DdqnAgent(GRID, np.random.default_rng(0))
        before = [w.copy() for w in agent.online.params()]
        obs = Observation(1.5, 1.6, 0)
        nxt = Observation(1.55, 1.6, 1)
        for _ in range(agent.batch_size):
            agent.observe(obs, 1.55, 0.2, nxt)
        assert agent.grad_steps == 1
        assert any(not np.array_equal(a, b)
                   for a, b in zip(before, agent.online.params()))

    def test_epsilon_floor_after_thousand_decays(self):
        agent = DdqnAgent(GRID, np.random.default_rng(0))
        obs = Observation(1.5, 1.6, 0)
        for _ in range(1000):
            agent.observe(obs, 1.55, 0.0, obs)
        assert agent.epsilon == pytest.approx(0.01, abs=1e-12)

    def test_normalization_roundtrip(self):
        agent = DdqnAgent(GRID, np.random.default_rng(0))
        for p in GRID.points:
            assert agent.denormalize(agent.normalize(p)) == pytest.approx(p, abs=1e-12)
            assert -1.0 <= agent.normalize(p) <= 1.0

    def test_target_copies_every_period(self):
        agent = DdqnAgent(GRID, np.random.default_rng(1), target_period=3)
        obs = Observation(1.5, 1.6, 0)
        for _ in range(agent.batch_size + 2):
            agent.observe(obs, 1.55, 0.2, obs)
        assert agent.grad_steps == 3
        assert all(np.array_equal(o, t) for o, t in
                   zip(agent.online.state_arrays(), agent.target.state_arrays()))


class TestDdpgAgent:
    def _agent(self, seed=0):
        return DdpgAgent(GRID, np.random.default_rng(seed))

    def test_zero_actor_centers_price(self):
        agent = self._agent()
        for p in agent.actor.params():
            p[...] = 0.0
        agent.exploration_scale = 0.0
        price = agent.act(Observation(1.0, 1.0, 0))
        assert price == pytest.approx(1.0, abs=1e-12)

    def test_action_endpoints_map_to_price_bounds(self):
        agent = self._agent()
        assert agent.denormalize(1.0) == 2.0
        assert agent.denormalize(-1.0) == 0.0

    def test_noise_pushes_action_into_clamp(self):
        agent = self._agent()
        for p in agent.actor.params():
            p[...] = 0.0

        class _Push:
            def step(self):
                return 1.3

        agent.noise = _Push()
        agent.exploration_scale = 1.0
        price = agent.act(Observation(1.0, 1.0, 0))
        assert price == pytest.approx(2.0, abs=1e-12)

    def test_exploration_scale_decays_to_floor(self):
        agent = self._agent()
        obs = Observation(1.0, 1.0, 0)
        for _ in range(agent.batch_size - 1):
            agent.observe(obs, 1.0, 0.0, obs)
        assert agent.exploration_scale == pytest.approx(
            0.9993 ** (agent.batch_size - 1), abs=1e-12)

    def test_zero_networks_zero_rewards_stay_fixed(self):
        agent = self._agent()
        for p in (*agent.actor.params(), *agent.critic.params(),
                  *agent.actor_target.params(), *agent.critic_target.params()):
            p[...] = 0.0
        obs = Observation(1.0, 1.0, 0)
        for _ in range(agent.batch_size + 5):
            agent.observe(obs, 1.0, 0.0, obs)
        # TD target and critic output are both zero, so every gradient is
        # zero and the decoupled weight decay shrinks zeros to zeros
        assert all(np.allclose(p, 0.0) for p in agent.actor.params())
        assert all(np.allclose(p, 0.0)
                   for p in agent.critic.params() if p.ndim == 2)

    def test_soft_updates_track_online_networks(self):
        agent = self._agent(seed=2)
        rng = np.random.default_rng(3)
        obs = Observation(1.2, 0.9, 0)
        before = [t.copy() for t in agent.actor_target.params()]
        for t in range(agent.batch_size + 20):
            o = Observation(1.0 + 0.1 * rng.random(), 1.0, t)
            agent.observe(o, float(rng.uniform(0.5, 1.5)), float(rng.random()), o)
        after = agent.actor_target.params()
        assert any(not np.array_equal(a, b) for a, b in zip(before, after))
        # target stays close to its EMA trajectory, not equal to online
        assert any(not np.array_equal(o, t) for o, t in
                   zip(agent.actor.params(), after))

    def test_policy_action_is_noiseless_and_bounded(self):
        agent = self._agent(seed=4)
        obs = Observation(1.3, 1.7, 0)
        a1 = agent.policy_action(obs)
        a2 = agent.policy_action(obs)
        assert a1 == a2
        assert -1.0 <= a1 <= 1.0
