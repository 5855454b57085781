"""Seeded simulator comparing a human operator and two VR-controlled robots on
vineyard disease scanning, targeted treatment and yield-map surveys."""

from .agents import AgentProfile, ScanStrategy, builtin_profiles, service_time
from .errors import (ConfigError, DomainError, InputFormatError, InvalidGeometryError,
                     MisuseError, SizeLimitError, VinesimError)
from .experiment import (ExperimentStats, ScenarioConfig, format_hm, percent_difference,
                         run_experiment, summarize_to_tables)
from .field import (Difficulty, FieldGeometry, FieldPoint, Side, Spot, YieldMap, ZoneEpicenter,
                    build_field, extract_low_yield_zones, generate_spots, load_yield_map,
                    map_yield_classes, preset_field)
from .phases import (SurveyMode, simulate_scan, simulate_treatment_full_rescan,
                     simulate_treatment_targeted, simulate_yield_survey)
from .results import PhaseResult
from .routing import (Route, improve_route_2opt, plan_route, plan_route_exact,
                      plan_route_nearest_neighbor, route_time, row_distance)

__version__ = "0.1.0"
