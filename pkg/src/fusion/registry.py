from typing import Dict, Type, TypeVar

from .base_method import BaseFusionMethod

T = TypeVar("T", bound=BaseFusionMethod)

FUSION_METHOD_REGISTRY: Dict[str, Type[BaseFusionMethod]] = {}


def register_fusion_method(name: str):
    def _register(cls: Type[T]) -> Type[T]:
        FUSION_METHOD_REGISTRY[name] = cls
        cls.name = name
        return cls

    return _register


def get_fusion_method(
    fusion_method_name: str,
    ignorance_floor: float = 0.1,
    oracle_max_frame_size: int = 16,
) -> BaseFusionMethod:
    """
    Returns a fusion method based on the name.

    Args:
        * fusion_method_name (str): The name of the fusion method, one of the registered names
            ('triplet', 'dichotomous', 'oracle')
        * ignorance_floor (float): Share of the non-focus score mass that the dichotomous
            mapping moves to ignorance
        * oracle_max_frame_size (int): Largest number of categories the oracle method accepts
    Returns:
        * BaseFusionMethod: A fusion method
    """

    if fusion_method_name in FUSION_METHOD_REGISTRY:
        return FUSION_METHOD_REGISTRY[fusion_method_name](
            ignorance_floor=ignorance_floor,
            oracle_max_frame_size=oracle_max_frame_size,
        )
    else:
        raise ValueError(f"Fusion method {fusion_method_name} not supported.")
