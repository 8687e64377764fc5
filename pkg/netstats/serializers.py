from rest_framework import serializers


class StatsReportSerializer(serializers.Serializer):
    """
    Stats JSON schema. Field order is the order written to disk.
    """
    n = serializers.IntegerField(min_value=0)
    m = serializers.IntegerField(min_value=0)
    lcc = serializers.FloatField(min_value=0.0, max_value=1.0)
    mean_degree = serializers.FloatField(min_value=0.0)
    mean_clustering = serializers.FloatField(min_value=0.0, max_value=1.0)
    mean_distance = serializers.FloatField(min_value=0.0)
    diameter = serializers.IntegerField(min_value=0)
    assortativity = serializers.FloatField(min_value=-1.0, max_value=1.0, allow_null=True)
    modularity = serializers.FloatField(max_value=1.0)
    modularity_runs = serializers.IntegerField(min_value=1)
    unreachable_fraction = serializers.FloatField(min_value=0.0, max_value=1.0)


class PowerLawFitSerializer(serializers.Serializer):
    gamma = serializers.FloatField()
    k_min = serializers.IntegerField(min_value=1)
    ks = serializers.FloatField(min_value=0.0)
    sigma = serializers.FloatField(allow_null=True)
    tail_size = serializers.IntegerField(min_value=1)
