from django.core.management.base import CommandParser

import numpy as np
from math import cos, sin
from typing import Any

from nestedcones.geometry import hypercone_geodesic_distance, sample_on_cone
from nestedcones.io import parse_angle
from nestedcones.management.base import PNCCommand
from nestedcones.models import ConePoint


AXIS = np.array([0.0, 0.0, 1.0])


class Command(PNCCommand):
    help = (
        "Prints the geodesic distance between two points of a cone in R^3 whose "
        "base directions are THETA apart."
    )

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("--alpha", type=parse_angle, required=True)
        parser.add_argument("--r1", type=float, required=True)
        parser.add_argument("--r2", type=float, required=True)
        parser.add_argument("--theta", type=parse_angle, required=True)

    def run(self, **options: Any):
        theta = options["theta"]
        points = sample_on_cone(
            AXIS,
            options["alpha"],
            sizes=[options["r1"], options["r2"]],
            base_directions=[[1.0, cos(theta)], [0.0, sin(theta)]],
        )
        value = hypercone_geodesic_distance(
            ConePoint(points[:, 0]), ConePoint(points[:, 1]), options["alpha"], AXIS
        )
        self.stdout.write(f"{value:#.6g}")
        return [], []
