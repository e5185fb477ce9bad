"""
Named experiment presets.

Each preset pins the graph, atom and noise parameters of one experiment
protocol; the images are synthetic substitutes that ship with the package.
"""

import math

from src.exceptions import ConfigError
from src.models.experiment import FarFieldSource, MaskKind, MaskSpec, Method, Preset
from src.models.params import GraphParams, TomographyStyle

TEXTURE_GRAPH = GraphParams(eta=20, rho=7, eps=5, m0=10, h=100.0)
SCATTER_GRAPH = GraphParams(eta=100, rho=5, eps=3, m0=6, h=100.0)
SMALL_GRAPH = GraphParams(eta=20, rho=5, eps=1, m0=8, h=100.0)
TOMO_GRAPH = GraphParams(eta=60, rho=9, eps=3, m0=10, h=100.0)

# One wavelength spans 32/3 pixels, so the 6 px bar gap is 0.5625 lambda
SCATTER_MASK = MaskSpec(
    kind=MaskKind.SCATTERING, k_wave=3 * math.pi, n_dirs=32, wavelength_px=32 / 3
)

PRESETS: dict[str, Preset] = {
    preset.name: preset
    for preset in [
        Preset(
            name="figToy",
            description="Stripes of period 4 in two orientations under the three-band mask",
            n=128,
            image="stripes",
            mask=MaskSpec(kind=MaskKind.RINGS),
            graph=TEXTURE_GRAPH,
            n0=25,
            p=4.0,
            methods=[Method.SSD, Method.ATOM, Method.TV],
        ),
        Preset(
            name="figOracle",
            description="Oracle weights with alpha = 1 and alpha = 2 against TV",
            n=128,
            image="stripes",
            mask=MaskSpec(kind=MaskKind.RINGS),
            graph=TEXTURE_GRAPH,
            n0=25,
            methods=[Method.ORACLE_L1, Method.ORACLE, Method.TV],
        ),
        Preset(
            name="figBarb",
            description="Random-tile texture under the three-band mask",
            n=120,
            image="tiles",
            mask=MaskSpec(kind=MaskKind.RINGS),
            graph=TEXTURE_GRAPH,
            n0=25,
            p=4.0,
            methods=[Method.SSD, Method.ATOM, Method.ORACLE, Method.TV],
        ),
        Preset(
            name="figScat",
            description="Disks probed at k = 3 pi with 32 directions, exact data",
            n=128,
            scene="disks",
            mask=SCATTER_MASK,
            graph=SCATTER_GRAPH,
            n0=18,
            atoms_at_gap=True,
            methods=[Method.TV, Method.ATOM, Method.SSD],
        ),
        Preset(
            name="figScatNoisy",
            description="figScat with Gaussian noise of norm 0.03 ||g0||",
            n=128,
            scene="disks",
            mask=SCATTER_MASK,
            graph=SCATTER_GRAPH,
            n0=18,
            atoms_at_gap=True,
            noise=0.03,
            methods=[Method.TV, Method.ATOM, Method.SSD],
        ),
        Preset(
            name="figScatBorn",
            description="figScat with far-field data of the continuous scatterer",
            n=128,
            scene="disks",
            far_field=FarFieldSource.CONTINUOUS,
            mask=SCATTER_MASK,
            graph=SCATTER_GRAPH,
            n0=18,
            atoms_at_gap=True,
            methods=[Method.TV, Method.ATOM, Method.SSD],
        ),
        Preset(
            name="figScatParallel",
            description="Four bars 6 pixels apart, resolution test",
            n=128,
            scene="bars",
            separation=6,
            mask=SCATTER_MASK,
            graph=SCATTER_GRAPH,
            n0=18,
            atoms_at_gap=True,
            methods=[Method.TV, Method.ATOM, Method.SSD],
        ),
        Preset(
            name="figRecompute",
            description="Disks with SSD weights recomputed on the restoration 20 times",
            n=128,
            scene="disks",
            mask=SCATTER_MASK,
            graph=SCATTER_GRAPH,
            n0=18,
            atoms_at_gap=True,
            methods=[Method.SSD, Method.RECOMPUTED],
            recompute_rounds=20,
        ),
        Preset(
            name="figLen",
            description="Small stripes image, alpha = 1 against alpha = 2 for SSD and atom weights",
            n=64,
            image="stripes",
            mask=MaskSpec(kind=MaskKind.RINGS),
            graph=SMALL_GRAPH,
            n0=18,
            p=20.0,
            methods=[Method.SSD_L1, Method.SSD, Method.ATOM_L1, Method.ATOM, Method.TV],
        ),
        Preset(
            name="figTomo",
            description="Phantom on 32 radial lines with noise 0.3 ||g0||, hybrid schedule",
            n=240,
            image="phantom",
            mask=MaskSpec(kind=MaskKind.TOMOGRAPHY, n_lines=32, style=TomographyStyle.RADIAL),
            graph=TOMO_GRAPH,
            n0=18,
            noise=0.3,
            methods=[Method.SSD, Method.RECOMPUTED, Method.ATOM, Method.HYBRID, Method.TV],
            recompute_rounds=20,
        ),
    ]
}


def get_preset(name: str) -> Preset:
    """
    Look up a preset by name.

    Raises:
        ConfigError: If no preset has that name
    """
    try:
        return PRESETS[name]
    except KeyError as e:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from e
