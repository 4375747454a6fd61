import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from linkform.model import GameConfig, InterfaceSpec, Node


def make_iface(kind="longrange", freq=1.0e9, bitrate=1.0e6, tx=1.0, rx=1e-12, gain=1.0):
    return InterfaceSpec(
        kind=kind,
        frequency_hz=freq,
        max_bitrate_bps=bitrate,
        max_tx_power_w=tx,
        rx_sensitivity_w=rx,
        antenna_gain=gain,
    )


def make_node(node_id, position, interfaces=None, b_min=1.0e5, rho=1.0, ic=False):
    if interfaces is None:
        interfaces = (make_iface(),)
    return Node(
        id=node_id,
        position=position,
        interfaces=tuple(interfaces),
        min_required_bitrate_bps=b_min,
        energy_weight=rho,
        internet_connected=ic,
    )


@pytest.fixture
def config():
    return GameConfig(gamma=10.0, h_max=5)


# Table-style radio parameters used across tests (2.4 GHz WLAN/Bluetooth, 908 MHz Z-Wave)
WLAN = make_iface("wlan", 2.4e9, 300e6, 1.0, 1e-11)
BLUETOOTH = make_iface("bluetooth", 2.4e9, 2e6, 0.025, 1e-10)
ZWAVE = make_iface("zwave", 0.908e9, 40e3, 1e-3, 6.3e-13)
