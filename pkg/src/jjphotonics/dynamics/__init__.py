from .source import (
    DriveParams,
    EventRecord,
    LatchParams,
    SourceParams,
    equilibrium_start_charge,
    rate_profile_after_event,
    simulate_source,
)
from .renewal import renewal_g2_oracle
from .waveform import events_to_envelope
from .g2 import g2_from_events

__all__ = [
    "DriveParams",
    "EventRecord",
    "LatchParams",
    "SourceParams",
    "events_to_envelope",
    "g2_from_events",
    "equilibrium_start_charge",
    "rate_profile_after_event",
    "renewal_g2_oracle",
    "simulate_source",
]
