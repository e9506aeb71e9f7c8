"""screenforge: a codeless, screen-oriented application platform.

The package is organised around the lifecycle of an application:

- ``screenforge.model``       declarative application model (parse, validate, lint, edit)
- ``screenforge.registry``    backend discovery and the design-time service catalogue
- ``screenforge.gateway``     session runtime and adapter mediation (FastAPI service)
- ``screenforge.deploy``      platform-tagged bundle builds and the app catalogue
- ``screenforge.backend_sim`` simulated enterprise backend used for development and tests
- ``screenforge.cli``         the ``screenforge`` command line front end
"""

__version__ = "0.1.0"
