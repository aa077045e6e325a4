"""dB / dBm conversions. Library code works in linear mW; these are used at the
configuration and reporting boundary only."""
import numpy as np


def db_to_lin(x_db):
    return 10.0 ** (np.asarray(x_db, dtype=float) / 10.0) if np.ndim(x_db) else 10.0 ** (float(x_db) / 10.0)


def lin_to_db(x):
    return 10.0 * np.log10(x)


def dbm_to_mw(p_dbm):
    return db_to_lin(p_dbm)


def mw_to_dbm(p_mw):
    return lin_to_db(p_mw)


def noise_power_mw(density_dbm_per_hz: float, bandwidth_hz: float) -> float:
    """Thermal noise power over ``bandwidth_hz`` (no receiver noise figure)."""
    return float(dbm_to_mw(density_dbm_per_hz + 10.0 * np.log10(bandwidth_hz)))
