from enum import StrEnum

from drumchart_curation.components.chart.schemas import AnimationLabel, GameplayLabel


class DrumClass(StrEnum):
    """
    The five output classes. The value is the label written to annotation files.
    """

    BD = "BD"
    SD = "SD"
    TT = "TT"
    HH = "HH"
    CY_RD = "CY+RD"


GAMEPLAY_CLASSES: dict[GameplayLabel, DrumClass] = {
    GameplayLabel.ORANGE_DRUM: DrumClass.BD,
    GameplayLabel.RED_DRUM: DrumClass.SD,
    GameplayLabel.YELLOW_DRUM: DrumClass.TT,
    GameplayLabel.BLUE_DRUM: DrumClass.TT,
    GameplayLabel.GREEN_DRUM: DrumClass.TT,
    GameplayLabel.YELLOW_CYMBAL: DrumClass.HH,
    GameplayLabel.BLUE_CYMBAL: DrumClass.CY_RD,
    GameplayLabel.GREEN_CYMBAL: DrumClass.CY_RD,
}

ANIMATION_CLASSES: dict[AnimationLabel, DrumClass] = {
    AnimationLabel.BASS_DRUM: DrumClass.BD,
    AnimationLabel.SNARE_DRUM: DrumClass.SD,
    AnimationLabel.RACK_TOM_1: DrumClass.TT,
    AnimationLabel.RACK_TOM_2: DrumClass.TT,
    AnimationLabel.FLOOR_TOM: DrumClass.TT,
    AnimationLabel.HI_HAT_OPEN: DrumClass.HH,
    AnimationLabel.HI_HAT_CLOSE: DrumClass.HH,
    AnimationLabel.CRASH_1: DrumClass.CY_RD,
    AnimationLabel.CRASH_2: DrumClass.CY_RD,
    AnimationLabel.RIDE_CYMBAL: DrumClass.CY_RD,
}

# Gameplay label that stands for each class when a resolved track is written back as gameplay.
CANONICAL_GAMEPLAY: dict[DrumClass, GameplayLabel] = {
    DrumClass.BD: GameplayLabel.ORANGE_DRUM,
    DrumClass.SD: GameplayLabel.RED_DRUM,
    DrumClass.TT: GameplayLabel.YELLOW_DRUM,
    DrumClass.HH: GameplayLabel.YELLOW_CYMBAL,
    DrumClass.CY_RD: GameplayLabel.BLUE_CYMBAL,
}


def map_gameplay(label: GameplayLabel) -> DrumClass:
    return GAMEPLAY_CLASSES[label]


def map_animation(label: AnimationLabel) -> DrumClass:
    return ANIMATION_CLASSES[label]


__all__ = [
    "DrumClass",
    "GAMEPLAY_CLASSES",
    "ANIMATION_CLASSES",
    "CANONICAL_GAMEPLAY",
    "map_gameplay",
    "map_animation",
]
