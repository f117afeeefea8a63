import random
import threading
import time

import pytest

from gymgate.gateway import (
    BookingStore,
    BusyError,
    LeaseLostError,
    LeaseManager,
    NoBookingError,
)
from gymgate.gateway.storage import JsonlStore

ENVS = ["EnvA", "EnvB", "EnvC", "EnvD"]
USERS = [f"u{i}" for i in range(8)]


def open_bookings(tmp_path, horizon=10_000_000.0):
    """Every user booked on every env for the whole test horizon."""
    bookings = BookingStore(JsonlStore(tmp_path / "b.jsonl"))
    for env in ENVS:
        for i, user in enumerate(USERS):
            # per-env intervals must not overlap; give each user a rotating slice
            width = horizon / len(USERS)
            bookings.add(user, env, i * width, (i + 1) * width)
    return bookings


class SerialOracle:
    """Single-authority reference: a dict of env -> (user, deadline)."""

    def __init__(self, bookings, ttl):
        self.bookings = bookings
        self.ttl = ttl
        self.held = {}

    def acquire(self, user, env, now):
        if self.bookings.covering(user, env, now) is None:
            return "no-booking"
        holder = self.held.get(env)
        if holder is not None and holder[1] > now:
            return "busy"
        self.held[env] = (user, now + self.ttl)
        return "granted"

    def touch(self, env, now):
        holder = self.held.get(env)
        if holder is None or holder[1] <= now:
            self.held.pop(env, None)
            return "lost"
        self.held[env] = (holder[0], now + self.ttl)
        return "renewed"

    def release(self, env):
        self.held.pop(env, None)

    def expire(self, now):
        stale = sorted(e for e, (_, d) in self.held.items() if d <= now)
        for env in stale:
            del self.held[env]
        return stale

    def live(self, now):
        return {e: u for e, (u, d) in self.held.items() if d > now}


def test_acquire_grant_busy_no_booking(tmp_path):
    bookings = BookingStore(JsonlStore(tmp_path / "b.jsonl"))
    bookings.add("u1", "EnvA", 100.0, 200.0)
    vt = [150.0]
    leases = LeaseManager(bookings, ttl=60.0, clock=lambda: vt[0])
    lease = leases.acquire("u1", "EnvA")
    assert lease.heartbeat_deadline == 210.0
    with pytest.raises(BusyError):
        leases.acquire("u1", "EnvA")
    with pytest.raises(NoBookingError):
        leases.acquire("u2", "EnvA")
    vt[0] = 205.0  # booking over at 200
    leases.release(lease.lease_id)
    with pytest.raises(NoBookingError):
        leases.acquire("u1", "EnvA")


def test_touch_renews_and_expiry_reclaims(tmp_path):
    bookings = BookingStore(JsonlStore(tmp_path / "b.jsonl"))
    bookings.add("u1", "EnvA", 0.0, 1e9)
    bookings.add("u2", "EnvA", 1e9, 2e9)
    vt = [0.0]
    reclaimed = []
    leases = LeaseManager(bookings, ttl=60.0, clock=lambda: vt[0],
                          on_reclaim=reclaimed.append)
    lease = leases.acquire("u1", "EnvA")
    # heartbeat every 10 s keeps it alive well past the ttl
    for _ in range(20):
        vt[0] += 10.0
        lease = leases.touch(lease.lease_id)
    assert leases.holder("EnvA").user_id == "u1"
    assert leases.expire() == []
    # silence for ttl + epsilon drops it
    vt[0] += 60.1
    assert leases.expire() == ["EnvA"]
    assert reclaimed == ["EnvA"]
    assert leases.holder("EnvA") is None
    with pytest.raises(LeaseLostError):
        leases.touch(lease.lease_id)


def test_stale_lease_reclaimed_lazily_on_acquire(tmp_path):
    bookings = BookingStore(JsonlStore(tmp_path / "b.jsonl"))
    bookings.add("u1", "EnvA", 0.0, 1e6)
    bookings.add("u2", "EnvB", 0.0, 1e6)
    bookings.add("u2", "EnvA", 1e6, 2e6)
    vt = [0.0]
    reclaimed = []
    leases = LeaseManager(bookings, ttl=60.0, clock=lambda: vt[0],
                          on_reclaim=reclaimed.append)
    leases.acquire("u1", "EnvA")
    vt[0] = 1e6 + 10
    lease = leases.acquire("u2", "EnvA")  # u1 stale by now
    assert lease.user_id == "u2"
    assert reclaimed == ["EnvA"]


def test_three_stale_among_five(tmp_path):
    bookings = BookingStore(JsonlStore(tmp_path / "b.jsonl"))
    envs = [f"E{i}" for i in range(5)]
    for env in envs:
        bookings.add("u1", env, 0.0, 1e9)
    vt = [0.0]
    leases = LeaseManager(bookings, ttl=60.0, clock=lambda: vt[0])
    held = {env: leases.acquire("u1", env) for env in envs}
    # keep two fresh, let three age out
    vt[0] = 50.0
    leases.touch(held["E0"].lease_id)
    leases.touch(held["E3"].lease_id)
    vt[0] = 100.0  # E1/E2/E4 deadlines were 60
    assert sorted(leases.expire()) == ["E1", "E2", "E4"]
    assert {l.env_id for l in leases.live_leases()} == {"E0", "E3"}


def run_randomized_comparison(tmp_path, ops: int = 10_000, seed: int = 20240) -> None:
    """Drive a LeaseManager and the serial oracle through the same random
    op sequence, asserting identical outcomes and live state after each op."""
    bookings = open_bookings(tmp_path)
    ttl = 60.0
    vt = [1.0]
    leases = LeaseManager(bookings, ttl=ttl, clock=lambda: vt[0])
    oracle = SerialOracle(bookings, ttl)
    rng = random.Random(seed)
    live = {}  # env -> lease (as granted by the manager)

    for _ in range(ops):
        op = rng.random()
        if op < 0.45:
            user, env = rng.choice(USERS), rng.choice(ENVS)
            expected = oracle.acquire(user, env, vt[0])
            try:
                lease = leases.acquire(user, env)
                got = "granted"
                live[env] = lease
            except BusyError:
                got = "busy"
            except NoBookingError:
                got = "no-booking"
            assert got == expected, f"acquire({user},{env}) at {vt[0]}"
        elif op < 0.65:
            env = rng.choice(ENVS)
            if env in live:
                expected = oracle.touch(env, vt[0])
                try:
                    live[env] = leases.touch(live[env].lease_id)
                    got = "renewed"
                except LeaseLostError:
                    got = "lost"
                    del live[env]
                assert got == expected
        elif op < 0.75:
            env = rng.choice(ENVS)
            if env in live:
                oracle.release(env)
                leases.release(live.pop(env).lease_id)
        elif op < 0.85:
            expected = oracle.expire(vt[0])
            got = sorted(leases.expire())
            assert got == expected
            for env in got:
                live.pop(env, None)
        else:
            vt[0] += rng.choice([0.5, 5.0, 30.0, 61.0])

        mine = {l.env_id: l.user_id for l in leases.live_leases()}
        assert mine == oracle.live(vt[0]), f"state diverged at t={vt[0]}"
        assert len({l.env_id for l in leases.live_leases()}) == len(leases.live_leases())


def test_randomized_ops_match_serial_oracle(tmp_path):
    run_randomized_comparison(tmp_path)


def test_concurrent_stress_never_co_grants(tmp_path):
    # 8 threads hammer 4 envs with a 50 ms ttl; grant intervals per env,
    # taken from the manager's own timestamps, must be pairwise disjoint
    bookings = BookingStore(JsonlStore(tmp_path / "b.jsonl"))
    for env in ENVS:
        bookings.add("shared", env, 0.0, 1e12)
    leases = LeaseManager(bookings, ttl=0.05)
    grants = []
    grants_lock = threading.Lock()
    stop = time.monotonic() + 2.0
    done = threading.Event()

    def sweeper():
        while not done.wait(0.01):
            leases.expire()

    def worker(seed):
        rng = random.Random(seed)
        while time.monotonic() < stop:
            env = rng.choice(ENVS)
            try:
                lease = leases.acquire("shared", env)
            except BusyError:
                continue
            if rng.random() < 0.7:
                time.sleep(rng.random() * 0.01)
                end = time.time()  # sampled while still holding
                leases.release(lease.lease_id)
                end = min(end, lease.heartbeat_deadline)
            else:
                # abandon; the right to the env lapses at the deadline
                end = lease.heartbeat_deadline
                time.sleep(0.06)
            with grants_lock:
                grants.append((env, lease.acquired_at, end))

    sweep = threading.Thread(target=sweeper)
    sweep.start()
    threads = [threading.Thread(target=worker, args=(i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    done.set()
    sweep.join()

    assert len(grants) > 200, "stress produced too few grants to mean anything"
    by_env: dict = {}
    for env, start, end in grants:
        by_env.setdefault(env, []).append((start, end))
    for env, intervals in by_env.items():
        intervals.sort()
        for (s1, e1), (s2, _) in zip(intervals, intervals[1:]):
            assert s2 >= e1, f"{env}: grant at {s2} began before previous ended at {e1}"
