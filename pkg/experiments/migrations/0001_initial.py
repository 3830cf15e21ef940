from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name='RunRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(choices=[('af', 'af'), ('theory', 'theory'), ('optimize', 'optimize'), ('tradeoff', 'tradeoff'), ('detect', 'detect')], max_length=16)),
                ('config_hash', models.CharField(max_length=64)),
                ('seed', models.IntegerField(default=0)),
                ('output_dir', models.CharField(max_length=255)),
                ('overrides', models.JSONField(default=list)),
                ('status', models.CharField(choices=[('ok', 'ok'), ('stall', 'stall')], default='ok', max_length=8)),
                ('summary', models.JSONField(default=dict)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ('created_at',),
            },
        ),
    ]
