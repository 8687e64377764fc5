from django.core.exceptions import ValidationError as DjangoValidationError
from rest_framework import serializers

from .specs import ModelKind, ModelSpec, SeedKind, SelectionRule


class ModelSpecSerializer(serializers.Serializer):
    """
    Input serializer for generation parameters (command line and API).

    validated_data['spec'] holds the cleaned ModelSpec.
    """
    kind = serializers.ChoiceField(choices=ModelKind.choices, default=ModelKind.WAR_PACT)
    n = serializers.IntegerField(min_value=1)
    m = serializers.IntegerField(min_value=0, required=False, allow_null=True)
    mean_degree = serializers.FloatField(min_value=0.0, required=False, allow_null=True)
    rule = serializers.ChoiceField(choices=SelectionRule.choices, default=SelectionRule.KR)
    seed_kind = serializers.ChoiceField(choices=SeedKind.choices, default=SeedKind.MATCHING)
    rng_seed = serializers.IntegerField(min_value=0, max_value=2 ** 64 - 1, default=0)
    rewire = serializers.FloatField(min_value=0.0, max_value=1.0, required=False, allow_null=True)

    def validate(self, attrs):
        spec = ModelSpec(
            kind=str(attrs['kind']),
            n=attrs['n'],
            m=attrs.get('m'),
            mean_degree=attrs.get('mean_degree'),
            rule=str(attrs['rule']),
            seed_kind=str(attrs['seed_kind']),
            rng_seed=attrs['rng_seed'],
            rewire=attrs.get('rewire'),
        )
        try:
            spec.clean()
        except DjangoValidationError as e:
            raise serializers.ValidationError(e.message_dict)
        attrs['spec'] = spec
        return attrs
